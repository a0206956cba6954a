#pragma once

// Shared oracles and generators for the test suite. Everything here
// re-derives, by deliberately slow and simple means, quantities the library
// computes with faster algorithms: brute-force convex geometry over exact
// rationals, exhaustive subset enumeration, and dense multi-level grid
// optimization. Tests compare the two implementations; none of the oracle
// code shares an algorithm with the code under test.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include "ccp/bench.hpp"
#include "ccp/exact.hpp"
#include "ccp/geometry.hpp"
#include "ccp/instance.hpp"
#include "ccp/minimal_subsets.hpp"
#include "ccp/presolve.hpp"
#include "ccp/projection.hpp"
#include "ccp/separability.hpp"
#include "ccp/solver.hpp"

namespace ccptest {

using ccp::IndexSet;
using ccp::Norm;
using ccp::PBPInstance;
using ccp::Point;
using ccp::Region;
using ccp::ScenarioSet;

// ---------------------------------------------------------------------------
// numeric comparison helpers
// ---------------------------------------------------------------------------

inline double rel_diff(double a, double b) {
  const double scale = std::max({1.0, std::abs(a), std::abs(b)});
  return std::abs(a - b) / scale;
}

inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t salt) {
  std::uint64_t x = base * 6364136223846793005ull + salt + 0x9e3779b97f4a7c15ull;
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ull;
  x ^= x >> 27;
  return x;
}

inline double unif(std::mt19937_64& rng, double lo, double hi) {
  const double u = (rng() >> 11) * 0x1.0p-53;
  return lo + u * (hi - lo);
}

inline int unif_int(std::mt19937_64& rng, int lo, int hi) {
  return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

// ---------------------------------------------------------------------------
// exact rational containment: q in conv(pts)?
//
// Caratheodory over subsets of at most four points, every predicate in
// rational arithmetic. 2D points embed with z = 0, which silently disables
// the tetrahedron case (always degenerate) and makes every triple coplanar.
// ---------------------------------------------------------------------------

namespace detail {

using ccp::exact::Q;
using Vec = ccp::exact::Vec3q;

inline Vec to_vec(const Point& p) { return ccp::exact::to_q3(p); }

inline bool q_equal(const Vec& a, const Vec& b) {
  return a[0] == b[0] && a[1] == b[1] && a[2] == b[2];
}

inline bool on_segment(const Vec& a, const Vec& b, const Vec& q) {
  const Vec v = ccp::exact::sub(b, a);
  const Vec w = ccp::exact::sub(q, a);
  if (ccp::exact::is_zero(v)) return ccp::exact::is_zero(w);  // a == b: a point
  if (!ccp::exact::is_zero(ccp::exact::cross(w, v))) return false;
  const Q t = ccp::exact::dot(w, v);
  return sgn(t) >= 0 && t <= ccp::exact::dot(v, v);
}

inline bool in_triangle(const Vec& a, const Vec& b, const Vec& c, const Vec& q) {
  const Vec u = ccp::exact::sub(b, a);
  const Vec v = ccp::exact::sub(c, a);
  const Vec w = ccp::exact::sub(q, a);
  const Vec n = ccp::exact::cross(u, v);
  if (ccp::exact::is_zero(n)) return false;       // degenerate: segments cover it
  if (sgn(ccp::exact::dot(n, w)) != 0) return false;  // not in the plane
  const Q uu = ccp::exact::dot(u, u), vv = ccp::exact::dot(v, v);
  const Q uv = ccp::exact::dot(u, v);
  const Q wu = ccp::exact::dot(w, u), wv = ccp::exact::dot(w, v);
  const Q den = uu * vv - uv * uv;  // > 0 since n != 0
  const Q s = wu * vv - wv * uv;
  const Q t = wv * uu - wu * uv;
  return sgn(s) >= 0 && sgn(t) >= 0 && s + t <= den;
}

inline bool in_tetrahedron(const Vec& a, const Vec& b, const Vec& c, const Vec& d,
                           const Vec& q) {
  const Vec u = ccp::exact::sub(b, a);
  const Vec v = ccp::exact::sub(c, a);
  const Vec w = ccp::exact::sub(d, a);
  const Q det = ccp::exact::dot(u, ccp::exact::cross(v, w));
  if (sgn(det) == 0) return false;  // flat: triangles cover it
  const Vec r = ccp::exact::sub(q, a);
  const Q al = ccp::exact::dot(r, ccp::exact::cross(v, w));
  const Q be = ccp::exact::dot(u, ccp::exact::cross(r, w));
  const Q ga = ccp::exact::dot(u, ccp::exact::cross(v, r));
  const int s = sgn(det);
  const Q sum = al + be + ga;
  auto ok = [&](const Q& x) { return sgn(x) == 0 || sgn(x) == s; };
  return ok(al) && ok(be) && ok(ga) && (sgn(det - sum) == 0 || sgn(det - sum) == s);
}

}  // namespace detail

inline bool brute_contains(const std::vector<Point>& pts, const Point& q) {
  using detail::to_vec;
  const detail::Vec qq = to_vec(q);
  const size_t n = pts.size();
  std::vector<detail::Vec> v;
  v.reserve(n);
  for (const Point& p : pts) v.push_back(to_vec(p));
  for (size_t i = 0; i < n; ++i)
    if (detail::q_equal(v[i], qq)) return true;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      if (detail::on_segment(v[i], v[j], qq)) return true;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      for (size_t k = j + 1; k < n; ++k)
        if (detail::in_triangle(v[i], v[j], v[k], qq)) return true;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      for (size_t k = j + 1; k < n; ++k)
        for (size_t l = k + 1; l < n; ++l)
          if (detail::in_tetrahedron(v[i], v[j], v[k], v[l], qq)) return true;
  return false;
}

/// flags[i] = true iff pts[i] is an extreme point: not contained in the hull
/// of the points at other positions (duplicates of pts[i] excluded).
inline std::vector<char> brute_extreme_flags(const std::vector<Point>& pts) {
  std::vector<char> flags(pts.size(), 0);
  for (size_t i = 0; i < pts.size(); ++i) {
    std::vector<Point> others;
    for (size_t j = 0; j < pts.size(); ++j)
      if (!(pts[j] == pts[i])) others.push_back(pts[j]);
    flags[i] = others.empty() ? 1 : (brute_contains(others, pts[i]) ? 0 : 1);
  }
  return flags;
}

/// Extreme positions of a point set, deduplicated and lexicographically
/// sorted, for order-insensitive comparison against a hull's vertex list.
inline std::vector<Point> sorted_unique_positions(std::vector<Point> pts) {
  std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) {
    for (int i = 0; i < a.dim; ++i) {
      if (a[i] < b[i]) return true;
      if (a[i] > b[i]) return false;
    }
    return false;
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

inline std::vector<Point> brute_extreme_positions(const std::vector<Point>& pts) {
  const std::vector<char> flags = brute_extreme_flags(pts);
  std::vector<Point> ext;
  for (size_t i = 0; i < pts.size(); ++i)
    if (flags[i]) ext.push_back(pts[i]);
  return sorted_unique_positions(std::move(ext));
}

/// Mirror of the library's index mapping: every extreme position of
/// {points[s] : s in S} is credited to the lowest index in S holding it.
inline IndexSet brute_vertex_indices(const std::vector<Point>& points, const IndexSet& S) {
  std::vector<Point> sel;
  for (int s : S) sel.push_back(points[static_cast<size_t>(s)]);
  const std::vector<Point> ext = brute_extreme_positions(sel);
  IndexSet out;
  for (const Point& v : ext)
    for (int s : S)
      if (points[static_cast<size_t>(s)] == v) {
        out.push_back(s);
        break;
      }
  return ccp::set_normalized(std::move(out));
}

inline IndexSet brute_enclosed_indices(const std::vector<Point>& points, const IndexSet& S) {
  std::vector<Point> sel;
  for (int s : S) sel.push_back(points[static_cast<size_t>(s)]);
  IndexSet out;
  for (int s = 0; s < static_cast<int>(points.size()); ++s)
    if (brute_contains(sel, points[static_cast<size_t>(s)])) out.push_back(s);
  return out;
}

// ---------------------------------------------------------------------------
// exhaustive separability: does any mass-feasible subset that respects the
// partition exclude xi_s from its convex hull?
// ---------------------------------------------------------------------------

inline bool brute_separable(const ScenarioSet& sc, int s, const IndexSet& safe,
                            const IndexSet& pruned, double tau) {
  const int n = sc.size();
  const double need = sc.total_mass() - tau - ccp::kMassSlack;
  std::uint32_t forbidden = 1u << s;
  for (int t : pruned) forbidden |= 1u << t;
  std::uint32_t must = 0;
  for (int t : safe) must |= 1u << t;
  if (must & forbidden) return false;  // s in safe: never separable
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (mask & forbidden) continue;  // subsets holding s contain xi_s trivially
    if ((mask & must) != must) continue;
    double mass = 0.0;
    for (int t = 0; t < n; ++t)
      if (mask & (1u << t)) mass += sc.pi[static_cast<size_t>(t)];
    if (mass < need) continue;
    std::vector<Point> pts;
    for (int t = 0; t < n; ++t)
      if (mask & (1u << t)) pts.push_back(sc.xi[static_cast<size_t>(t)]);
    if (!pts.empty() && !brute_contains(pts, sc.xi[static_cast<size_t>(s)])) return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// dense grids: independent feasibility + objective evaluation on lattices
// ---------------------------------------------------------------------------

/// Independent Euclidean projection onto an L1 ball: bisection on the
/// soft-threshold level rather than a sort-and-scan.
inline Point l1_project_oracle(const Point& q, const Point& c, double R) {
  Point v = q - c;
  double l1 = 0.0, top = 0.0;
  for (int i = 0; i < v.dim; ++i) {
    l1 += std::abs(v[i]);
    top = std::max(top, std::abs(v[i]));
  }
  if (l1 <= R) return q;
  double lo = 0.0, hi = top;
  for (int it = 0; it < 200; ++it) {
    const double theta = 0.5 * (lo + hi);
    double s = 0.0;
    for (int i = 0; i < v.dim; ++i) s += std::max(std::abs(v[i]) - theta, 0.0);
    (s > R ? lo : hi) = theta;
  }
  const double theta = 0.5 * (lo + hi);
  Point out(v.dim);
  for (int i = 0; i < v.dim; ++i) {
    const double m = std::max(std::abs(v[i]) - theta, 0.0);
    out[i] = c[i] + (v[i] < 0 ? -m : m);
  }
  return out;
}

/// Euclidean projection onto a max-norm ball: per-coordinate clamping.
inline Point linf_project_oracle(const Point& q, const Point& c, double R) {
  Point out(q.dim);
  for (int i = 0; i < q.dim; ++i)
    out[i] = std::min(std::max(q[i], c[i] - R), c[i] + R);
  return out;
}

inline double norm_oracle(const Point& a, const Point& b, Norm n) {
  double s = 0.0, m = 0.0, sq = 0.0;
  for (int i = 0; i < a.dim; ++i) {
    const double d = std::abs(a[i] - b[i]);
    s += d;
    m = std::max(m, d);
    sq += d * d;
  }
  switch (n) {
    case Norm::L1: return s;
    case Norm::L2: return std::sqrt(sq);
    case Norm::Linf: return m;
  }
  return m;
}

/// Largest constraint violation of x against the region, own arithmetic:
/// nonpositive means feasible.
inline double violation_oracle(const Region& reg, const Point& x) {
  double v = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < reg.dim; ++i) v = std::max(v, std::abs(x[i]) - reg.box_half_width);
  for (const ccp::Ball& b : reg.balls)
    v = std::max(v, norm_oracle(x, b.center, b.norm) - b.radius);
  return v;
}

struct L2Cap {
  Point center;
  double radius = std::numeric_limits<double>::infinity();
};

struct GridResult {
  bool any = false;
  double best = std::numeric_limits<double>::infinity();
  Point arg;
};

struct Enclosure {
  bool empty = false;
  std::array<double, 3> lo{}, hi{};
};

inline Enclosure enclosure_oracle(const Region& reg, const std::optional<L2Cap>& cap) {
  Enclosure e;
  for (int i = 0; i < reg.dim; ++i) {
    e.lo[static_cast<size_t>(i)] = -reg.box_half_width;
    e.hi[static_cast<size_t>(i)] = reg.box_half_width;
  }
  auto clip = [&](const Point& c, double r) {
    for (int i = 0; i < reg.dim; ++i) {
      e.lo[static_cast<size_t>(i)] = std::max(e.lo[static_cast<size_t>(i)], c[i] - r);
      e.hi[static_cast<size_t>(i)] = std::min(e.hi[static_cast<size_t>(i)], c[i] + r);
    }
  };
  for (const ccp::Ball& b : reg.balls) clip(b.center, b.radius);
  if (cap && std::isfinite(cap->radius)) clip(cap->center, cap->radius);
  for (int i = 0; i < reg.dim; ++i)
    if (e.lo[static_cast<size_t>(i)] > e.hi[static_cast<size_t>(i)]) e.empty = true;
  return e;
}

/// One lattice sweep of objective over the feasible points of a window.
/// p = 2 only (test scale). minimize=false flips to maximization.
template <class F>
inline void grid_sweep(const Region& reg, const std::optional<L2Cap>& cap, F&& objective,
                       const std::array<double, 2>& lo, const std::array<double, 2>& hi,
                       int m, bool minimize, GridResult& out) {
  const double hx = m > 1 ? (hi[0] - lo[0]) / (m - 1) : 0.0;
  const double hy = m > 1 ? (hi[1] - lo[1]) / (m - 1) : 0.0;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      Point x(lo[0] + hx * i, lo[1] + hy * j);
      if (violation_oracle(reg, x) > 0.0) continue;
      if (cap && norm_oracle(x, cap->center, Norm::L2) > cap->radius) continue;
      const double f = objective(x);
      if (!out.any || (minimize ? f < out.best : f > out.best)) {
        out.any = true;
        out.best = f;
        out.arg = x;
      }
    }
  }
}

/// Multi-level refined lattice minimizer of a convex objective over a fat
/// region: a coarse sweep of the coordinate enclosure followed by sweeps of
/// shrinking windows around the incumbent lattice point.
template <class F>
inline GridResult grid_minimize(const Region& reg, const std::optional<L2Cap>& cap,
                                F&& objective, int levels = 5) {
  GridResult out;
  const Enclosure e = enclosure_oracle(reg, cap);
  if (e.empty) return out;
  std::array<double, 2> lo{e.lo[0], e.lo[1]}, hi{e.hi[0], e.hi[1]};
  int m = 161;
  double h = std::max(hi[0] - lo[0], hi[1] - lo[1]) / (m - 1);
  grid_sweep(reg, cap, objective, lo, hi, m, true, out);
  if (!out.any) return out;
  for (int lv = 0; lv < levels; ++lv) {
    m = 121;
    const double w = 6.0 * h;
    std::array<double, 2> wlo{}, whi{};
    for (int i = 0; i < 2; ++i) {
      wlo[static_cast<size_t>(i)] =
          std::max(e.lo[static_cast<size_t>(i)], out.arg[i] - w);
      whi[static_cast<size_t>(i)] =
          std::min(e.hi[static_cast<size_t>(i)], out.arg[i] + w);
    }
    h = std::max(whi[0] - wlo[0], whi[1] - wlo[1]) / (m - 1);
    grid_sweep(reg, cap, objective, wlo, whi, m, true, out);
  }
  return out;
}

inline GridResult grid_min_distance(const Region& reg, const Point& target) {
  return grid_minimize(reg, std::nullopt,
                       [&](const Point& x) { return norm_oracle(x, target, Norm::L2); });
}

/// Single dense sweep for one-sided soundness checks of closed-form bounds.
inline GridResult grid_extremize_scenario_gap(const Region& reg,
                                              const std::optional<L2Cap>& cap,
                                              const Point& xi, Norm o_tilde, double R,
                                              bool maximize, int m = 241) {
  GridResult out;
  const Enclosure e = enclosure_oracle(reg, cap);
  if (e.empty) return out;
  std::array<double, 2> lo{e.lo[0], e.lo[1]}, hi{e.hi[0], e.hi[1]};
  grid_sweep(reg, cap,
             [&](const Point& x) { return norm_oracle(x, xi, o_tilde) - R; }, lo, hi, m,
             !maximize, out);
  return out;
}

// ---------------------------------------------------------------------------
// generators
// ---------------------------------------------------------------------------

/// Point sets with controlled degeneracy for the geometry suite.
///   class 0: generic continuous coordinates
///   class 1: coordinates snapped to a coarse lattice (exact ties, collinear
///            runs, points exactly on hull edges)
///   class 2: all points on one random line
///   class 3: all points in one random plane (3D; falls back to class 1 in 2D)
/// Every class additionally duplicates earlier points with small probability.
inline std::vector<Point> random_point_set(std::mt19937_64& rng, int n, int dim,
                                           int degeneracy_class) {
  std::vector<Point> pts;
  pts.reserve(static_cast<size_t>(n));
  auto raw = [&](double span) { return unif(rng, -span, span); };
  auto snapped = [&](double span) {
    return std::round(unif(rng, -span, span) * 4.0) / 4.0;
  };
  Point a(dim), b(dim), c(dim);
  for (int i = 0; i < dim; ++i) {
    a[i] = snapped(2.0);
    b[i] = snapped(2.0);
    c[i] = snapped(2.0);
  }
  for (int i = 0; i < n; ++i) {
    if (i > 0 && rng() % 7 == 0) {
      pts.push_back(pts[static_cast<size_t>(rng() % pts.size())]);
      continue;
    }
    Point p(dim);
    switch (degeneracy_class) {
      case 2: {  // on the line a + t(b - a), quarter-integer parameters
        const double t = std::round(unif(rng, -2.0, 2.0) * 4.0) / 4.0;
        for (int d = 0; d < dim; ++d) p[d] = a[d] + t * (b[d] - a[d]);
        break;
      }
      case 3: {
        if (dim == 3) {  // in the plane spanned by (b - a), (c - a)
          const double t = std::round(unif(rng, -1.5, 1.5) * 4.0) / 4.0;
          const double u = std::round(unif(rng, -1.5, 1.5) * 4.0) / 4.0;
          for (int d = 0; d < dim; ++d)
            p[d] = a[d] + t * (b[d] - a[d]) + u * (c[d] - a[d]);
          break;
        }
        [[fallthrough]];
      }
      case 1:
        for (int d = 0; d < dim; ++d) p[d] = snapped(2.0);
        break;
      default:
        for (int d = 0; d < dim; ++d) p[d] = raw(2.0);
        break;
    }
    pts.push_back(p);
  }
  return pts;
}

/// Probe points that exercise interior, boundary, and exterior cases:
/// the set's own points, pairwise midpoints, and uniform draws.
inline std::vector<Point> probe_points(std::mt19937_64& rng, const std::vector<Point>& pts,
                                       int n_random) {
  std::vector<Point> probes;
  const int dim = pts.empty() ? 2 : pts[0].dim;
  for (const Point& p : pts) probes.push_back(p);
  for (size_t i = 0; i + 1 < pts.size() && i < 6; ++i) {
    Point mid(dim);
    for (int d = 0; d < dim; ++d) mid[d] = 0.5 * (pts[i][d] + pts[i + 1][d]);
    probes.push_back(mid);
  }
  for (int i = 0; i < n_random; ++i) {
    Point p(dim);
    for (int d = 0; d < dim; ++d) p[d] = unif(rng, -2.5, 2.5);
    probes.push_back(p);
  }
  return probes;
}

/// A region guaranteed to contain an interior ball of the given margin
/// around a known point, so lattice searches always find feasible points.
struct FatRegion {
  Region reg;
  Point interior;
  double margin = 0.0;
};

inline FatRegion random_fat_region(std::mt19937_64& rng, int n_balls) {
  FatRegion out;
  out.margin = unif(rng, 0.15, 0.35);
  Point c(unif(rng, -1.4, 1.4), unif(rng, -1.4, 1.4));
  out.interior = c;
  out.reg.dim = 2;
  out.reg.box_half_width =
      std::max(std::abs(c[0]), std::abs(c[1])) + out.margin + unif(rng, 0.2, 1.0);
  for (int i = 0; i < n_balls; ++i) {
    const Norm nm = (rng() & 1) ? Norm::L1 : Norm::Linf;
    Point xi(unif(rng, -1.8, 1.8), unif(rng, -1.8, 1.8));
    const double r = norm_oracle(c, xi, nm) + out.margin + unif(rng, 0.0, 0.5);
    out.reg.balls.push_back(ccp::Ball{xi, r, nm});
  }
  return out;
}

/// Instance-level fat context for the closed-form bound tests: a p = 2
/// instance whose scenario balls all contain a common interior ball, plus a
/// safe set, a target scenario outside it, and an objective cap that keeps
/// the capped region nonempty.
struct FatContext {
  PBPInstance inst;
  IndexSet safe;
  int s = 0;
  double f_cap = std::numeric_limits<double>::infinity();
};

inline FatContext random_fat_context(std::mt19937_64& rng) {
  FatContext out;
  const double margin = unif(rng, 0.15, 0.35);
  const Point c(unif(rng, -0.8, 0.8), unif(rng, -0.8, 0.8));
  PBPInstance& inst = out.inst;
  inst.p = 2;
  inst.o = Norm::L2;
  inst.o_tilde = (rng() & 1) ? Norm::L1 : Norm::Linf;
  inst.R = margin + unif(rng, 0.4, 1.6);
  inst.R_bar = std::max(std::abs(c[0]), std::abs(c[1])) + margin + unif(rng, 0.3, 1.2);
  inst.x_bar = Point(unif(rng, -2.0, 2.0), unif(rng, -2.0, 2.0));
  inst.tau = 0.2;
  const int n = unif_int(rng, 4, 8);
  const double reach = inst.R - margin;
  for (int i = 0; i < n; ++i) {
    Point xi(2);
    while (true) {  // rejection sample the scenario into B(c, R - margin)
      xi[0] = c[0] + unif(rng, -reach, reach);
      xi[1] = c[1] + unif(rng, -reach, reach);
      if (norm_oracle(xi, c, inst.o_tilde) <= reach) break;
    }
    inst.scenarios.xi.push_back(xi);
    inst.scenarios.pi.push_back(1.0 / n);
  }
  out.s = unif_int(rng, 0, n - 1);
  if (rng() % 3 == 0) {
    // A probed scenario far outside the cluster, so the exclusion bound has
    // genuinely positive cases to certify.
    const double angle = unif(rng, 0.0, 6.283185307179586);
    const double d = inst.R + inst.R_bar + unif(rng, 1.0, 3.0);
    inst.scenarios.xi[static_cast<size_t>(out.s)] =
        c + d * Point(std::cos(angle), std::sin(angle));
  }
  for (int i = 0; i < n; ++i)
    if (i != out.s && rng() % 3 == 0) out.safe.push_back(i);
  if (rng() & 1)
    out.f_cap = norm_oracle(inst.x_bar, c, Norm::L2) + unif(rng, 0.3, 1.0);
  return out;
}

// ---------------------------------------------------------------------------
// chance-model helpers
// ---------------------------------------------------------------------------

/// Scenarios satisfied at x under the shared boundary tolerance.
inline IndexSet satisfied_indices(const PBPInstance& inst, const Point& x) {
  IndexSet u;
  for (int s = 0; s < inst.size(); ++s)
    if (norm_oracle(x, inst.scenarios.xi[static_cast<size_t>(s)], inst.o_tilde) <=
        inst.R + 1e-9)
      u.push_back(s);
  return u;
}

/// All mass-feasible selections (not only minimal ones) of a small instance.
inline std::vector<IndexSet> all_feasible_selections(const PBPInstance& inst) {
  const int n = inst.size();
  const double need = inst.chance_threshold() - ccp::kMassSlack;
  std::vector<IndexSet> out;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    double mass = 0.0;
    IndexSet S;
    for (int t = 0; t < n; ++t)
      if (mask & (1u << t)) {
        mass += inst.scenarios.pi[static_cast<size_t>(t)];
        S.push_back(t);
      }
    if (mass >= need) out.push_back(std::move(S));
  }
  return out;
}

}  // namespace ccptest
