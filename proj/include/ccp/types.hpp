#pragma once

// Shared value types: fixed-dimension points, norm tags, scenario index
// sets and the comparison tolerances used throughout the toolkit.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace ccp {

/// Slack for cumulative probability-mass comparisons against 1 - tau.
inline constexpr double kMassSlack = 1e-9;
/// Slack for objective-value comparisons (pruning, bound checks).
inline constexpr double kValueSlack = 1e-9;
/// Feasibility tolerance for points returned by projections.
inline constexpr double kFeasTol = 1e-8;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Norm { L1, L2, Linf };

inline std::string to_string(Norm n) {
  switch (n) {
    case Norm::L1: return "L1";
    case Norm::L2: return "L2";
    case Norm::Linf: return "Linf";
  }
  throw std::logic_error("unreachable norm tag");
}

inline Norm norm_from_string(const std::string& s) {
  if (s == "L1") return Norm::L1;
  if (s == "L2") return Norm::L2;
  if (s == "Linf") return Norm::Linf;
  throw std::invalid_argument("unknown norm: " + s);
}

/// Point in R^p, p in {2,3}. Fixed storage, value semantics.
struct Point {
  std::array<double, 3> c{0.0, 0.0, 0.0};
  int dim = 2;

  Point() = default;
  explicit Point(int d) : dim(d) {
    if (d != 2 && d != 3) throw std::invalid_argument("dimension must be 2 or 3");
  }
  Point(double x, double y) : c{x, y, 0.0}, dim(2) {}
  Point(double x, double y, double z) : c{x, y, z}, dim(3) {}

  double& operator[](int i) { return c[static_cast<size_t>(i)]; }
  double operator[](int i) const { return c[static_cast<size_t>(i)]; }

  bool operator==(const Point& o) const {
    if (dim != o.dim) return false;
    for (int i = 0; i < dim; ++i)
      if (c[static_cast<size_t>(i)] != o.c[static_cast<size_t>(i)]) return false;
    return true;
  }
};

inline Point operator+(const Point& a, const Point& b) {
  Point r(a.dim);
  for (int i = 0; i < a.dim; ++i) r[i] = a[i] + b[i];
  return r;
}

inline Point operator-(const Point& a, const Point& b) {
  Point r(a.dim);
  for (int i = 0; i < a.dim; ++i) r[i] = a[i] - b[i];
  return r;
}

inline Point operator*(double t, const Point& a) {
  Point r(a.dim);
  for (int i = 0; i < a.dim; ++i) r[i] = t * a[i];
  return r;
}

inline double dot(const Point& a, const Point& b) {
  double s = 0.0;
  for (int i = 0; i < a.dim; ++i) s += a[i] * b[i];
  return s;
}

inline double norm_of(const Point& a, Norm n) {
  switch (n) {
    case Norm::L1: {
      double s = 0.0;
      for (int i = 0; i < a.dim; ++i) s += std::abs(a[i]);
      return s;
    }
    case Norm::L2:
      return std::sqrt(dot(a, a));
    case Norm::Linf: {
      double m = 0.0;
      for (int i = 0; i < a.dim; ++i) m = std::max(m, std::abs(a[i]));
      return m;
    }
  }
  throw std::logic_error("unreachable norm tag");
}

inline double distance(const Point& a, const Point& b, Norm n) {
  return norm_of(a - b, n);
}

/// Sorted, duplicate-free set of 0-based scenario indices.
using IndexSet = std::vector<int>;

inline bool set_contains(const IndexSet& s, int v) {
  return std::binary_search(s.begin(), s.end(), v);
}

inline IndexSet set_insert(IndexSet s, int v) {
  auto it = std::lower_bound(s.begin(), s.end(), v);
  if (it == s.end() || *it != v) s.insert(it, v);
  return s;
}

inline IndexSet set_erase(IndexSet s, int v) {
  auto it = std::lower_bound(s.begin(), s.end(), v);
  if (it != s.end() && *it == v) s.erase(it);
  return s;
}

inline IndexSet set_union(const IndexSet& a, const IndexSet& b) {
  IndexSet r;
  r.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
  return r;
}

inline bool set_is_subset(const IndexSet& sub, const IndexSet& sup) {
  return std::includes(sup.begin(), sup.end(), sub.begin(), sub.end());
}

inline IndexSet set_normalized(IndexSet s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

/// Contract violation inside presolve: a certified-sound context turned out
/// to describe an empty region or a safe/pruned contradiction.
class inconsistency_error : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace ccp
