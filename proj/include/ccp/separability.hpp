#pragma once

// Separability test behind the safe-set fixings: scenario s can stay
// unselected only if some selectable subset S (containing every safe index,
// avoiding every pruned index, with mass above the chance threshold) has
// xi_s strictly outside conv{xi_t : t in S}. Equivalently, some open
// halfspace through xi_s strictly contains all safe points plus enough
// non-pruned mass. The search over halfspace directions is combinatorial
// and exact: in 2D one angular sweep over the directions perpendicular to
// the difference vectors; in 3D an enumeration of plane normals spanned by
// difference-vector pairs, each refined by an in-plane sweep that resolves
// points lying exactly on the candidate plane.

#include <chrono>
#include <optional>
#include <vector>

#include "ccp/exact.hpp"
#include "ccp/instance.hpp"
#include "ccp/types.hpp"

namespace ccp {

struct SeparabilityVerdict {
  bool separable = false;
  std::optional<Point> witness_direction;  // open halfspace normal at xi_s
  double witness_mass = 0.0;               // best strictly-contained mass seen
  bool timed_out = false;                  // deadline hit; no fixing allowed
};

namespace sep_detail {

using exact::Q;
using exact::Vec3q;

inline Vec3q negate(const Vec3q& a) { return {-a[0], -a[1], -a[2]}; }

struct SweepItem {
  Vec3q v;        // difference vector, lies in the sweep plane
  double mass = 0.0;
  bool required = false;  // safe index: must end up strictly positive
};

struct SweepOutcome {
  bool found = false;
  double best_mass = 0.0;  // max counted mass over all cells (diagnostic)
  Vec3q dir;               // in-plane direction realizing the found cell
};

/// Angular sweep inside the plane with normal n over nonzero in-plane
/// vectors. Finds a direction t with every required item strictly positive
/// and counted mass >= need (within the mass slack). Exact throughout;
/// cells between consecutive event directions are evaluated just after each
/// event, which covers every maximal open cell of the direction circle.
inline SweepOutcome sweep_in_plane(const Vec3q& n, const std::vector<SweepItem>& items,
                                   double need, int required_total) {
  SweepOutcome out;
  if (items.empty()) {
    if (required_total == 0 && need <= kMassSlack) {
      out.found = true;
      // Any in-plane direction works; build one orthogonal to n.
      Vec3q e{Q(1), Q(0), Q(0)};
      if (exact::is_zero(exact::cross(n, e))) e = Vec3q{Q(0), Q(1), Q(0)};
      out.dir = exact::cross(n, e);
    }
    return out;
  }

  struct Event {
    Vec3q dir;
    int item;
    bool enter;
  };
  std::vector<Event> events;
  events.reserve(items.size() * 2);
  for (int i = 0; i < static_cast<int>(items.size()); ++i) {
    Vec3q exit = exact::cross(n, items[static_cast<size_t>(i)].v);
    events.push_back(Event{negate(exit), i, true});
    events.push_back(Event{exit, i, false});
  }

  // Total angular order with a fixed reference direction r0. half 0 covers
  // [0, pi) starting at r0; ties inside a half resolved by the cross sign.
  const Vec3q r0 = events[0].dir;
  auto half_of = [&](const Vec3q& w) {
    int cr = exact::sign(exact::dot(exact::cross(r0, w), n));
    if (cr > 0) return 0;
    if (cr < 0) return 1;
    return exact::sign(exact::dot(r0, w)) > 0 ? 0 : 1;
  };
  auto angle_before = [&](const Vec3q& a, const Vec3q& b) {
    int ha = half_of(a), hb = half_of(b);
    if (ha != hb) return ha < hb;
    return exact::sign(exact::dot(exact::cross(a, b), n)) > 0;
  };
  auto same_dir = [&](const Vec3q& a, const Vec3q& b) {
    return exact::is_zero(exact::cross(a, b)) && exact::sign(exact::dot(a, b)) > 0;
  };
  std::sort(events.begin(), events.end(),
            [&](const Event& a, const Event& b) { return angle_before(a.dir, b.dir); });

  struct Group {
    Vec3q dir;
    std::vector<int> enters, exits;
  };
  std::vector<Group> groups;
  for (const Event& e : events) {
    if (groups.empty() || !same_dir(groups.back().dir, e.dir))
      groups.push_back(Group{e.dir, {}, {}});
    (e.enter ? groups.back().enters : groups.back().exits).push_back(e.item);
  }
  const int K = static_cast<int>(groups.size());

  // Membership just after the first event direction: sign of <g0, v>, ties
  // broken by the counterclockwise perturbation <rot90(g0), v>.
  const Vec3q g0 = groups[0].dir;
  const Vec3q g0p = exact::cross(n, g0);
  std::vector<bool> member(items.size(), false);
  double mass_in = 0.0;
  int req_in = 0;
  for (size_t i = 0; i < items.size(); ++i) {
    int s1 = exact::sign(exact::dot(g0, items[i].v));
    bool in = s1 > 0 || (s1 == 0 && exact::sign(exact::dot(g0p, items[i].v)) > 0);
    member[i] = in;
    if (in) {
      mass_in += items[i].mass;
      if (items[i].required) ++req_in;
    }
  }

  int found_cell = -1;
  auto consider = [&](int cell) {
    out.best_mass = std::max(out.best_mass, mass_in);
    if (found_cell < 0 && req_in == required_total && mass_in >= need - kMassSlack)
      found_cell = cell;
  };
  consider(0);
  for (int k = 1; k < K && found_cell < 0; ++k) {
    for (int i : groups[static_cast<size_t>(k)].exits)
      if (member[static_cast<size_t>(i)]) {
        member[static_cast<size_t>(i)] = false;
        mass_in -= items[static_cast<size_t>(i)].mass;
        if (items[static_cast<size_t>(i)].required) --req_in;
      }
    for (int i : groups[static_cast<size_t>(k)].enters)
      if (!member[static_cast<size_t>(i)]) {
        member[static_cast<size_t>(i)] = true;
        mass_in += items[static_cast<size_t>(i)].mass;
        if (items[static_cast<size_t>(i)].required) ++req_in;
      }
    consider(k);
  }
  if (found_cell < 0) return out;

  // Interior direction of the found cell (between group k and k+1): the
  // counterclockwise quarter turn for an antipodal gap, otherwise a positive
  // rational combination of the two boundary directions.
  const Vec3q& wa = groups[static_cast<size_t>(found_cell)].dir;
  const Vec3q& wb = groups[static_cast<size_t>((found_cell + 1) % K)].dir;
  out.found = true;
  out.dir = wa;
  if (exact::is_zero(exact::cross(wa, wb)) && exact::sign(exact::dot(wa, wb)) < 0) {
    out.dir = exact::cross(n, wa);
  } else {
    auto approx_norm = [](const Vec3q& w) {
      double x = w[0].get_d(), y = w[1].get_d(), z = w[2].get_d();
      double s = std::sqrt(x * x + y * y + z * z);
      return s > 0 ? s : 1.0;
    };
    Q a(approx_norm(wa)), b(approx_norm(wb));
    out.dir = Vec3q{b * wa[0] + a * wb[0], b * wa[1] + a * wb[1],
                    b * wa[2] + a * wb[2]};
  }
  return out;
}

inline Point to_point(const Vec3q& d, int dim) {
  Point w(dim);
  for (int i = 0; i < dim; ++i) w[i] = d[static_cast<size_t>(i)].get_d();
  double m = 0.0;
  for (int i = 0; i < dim; ++i) m = std::max(m, std::abs(w[i]));
  if (m > 0)
    for (int i = 0; i < dim; ++i) w[i] /= m;
  return w;
}

/// Exact check that a direction certifies separability: every safe point
/// strictly positive and enough non-pruned mass strictly positive.
template <class DirVec>
inline bool direction_valid(const ScenarioSet& sc, double threshold, int s,
                            const IndexSet& safe, const IndexSet& pruned,
                            const DirVec& dq) {
  using namespace exact;
  Vec3q xs = to_q3(sc.xi[static_cast<size_t>(s)]);
  double mass = 0.0;
  std::vector<bool> in(static_cast<size_t>(sc.size()), false);
  for (int t = 0; t < sc.size(); ++t) {
    if (t == s || set_contains(pruned, t)) continue;
    Vec3q vt = sub(to_q3(sc.xi[static_cast<size_t>(t)]), xs);
    if (sign(dot(dq, vt)) > 0) {
      in[static_cast<size_t>(t)] = true;
      mass += sc.pi[static_cast<size_t>(t)];
    }
  }
  for (int t : safe)
    if (!in[static_cast<size_t>(t)]) return false;
  return mass >= threshold - kMassSlack;
}

}  // namespace sep_detail

/// Decides whether scenario s is separable given the current partition.
/// separable=false is the trigger for a safe fixing: every sound subset's
/// hull contains xi_s. A true verdict carries a witness direction that
/// reproduces the separation under exact re-evaluation.
inline SeparabilityVerdict separability_check(
    const ScenarioSet& scenarios, int s, const IndexSet& safe,
    const IndexSet& pruned, double tau,
    const std::chrono::steady_clock::time_point* deadline = nullptr) {
  using namespace sep_detail;
  using exact::Q;

  SeparabilityVerdict verdict;
  const int n = scenarios.size();
  const int dim = scenarios.xi.empty() ? 2 : scenarios.xi[0].dim;
  const double threshold = scenarios.total_mass() - tau;

  if (set_contains(safe, s)) return verdict;  // s itself always selected

  exact::Vec3q xs = exact::to_q3(scenarios.xi[static_cast<size_t>(s)]);
  std::vector<SweepItem> items;
  items.reserve(static_cast<size_t>(n));
  int required_total = 0;
  for (int t = 0; t < n; ++t) {
    if (t == s || set_contains(pruned, t)) continue;
    SweepItem it;
    it.v = exact::sub(exact::to_q3(scenarios.xi[static_cast<size_t>(t)]), xs);
    it.mass = scenarios.pi[static_cast<size_t>(t)];
    it.required = set_contains(safe, t);
    if (exact::is_zero(it.v)) {
      // Coincides with xi_s: never strictly positive. A coincident safe
      // point rules separation out entirely.
      if (it.required) return verdict;
      continue;
    }
    if (it.required) ++required_total;
    items.push_back(std::move(it));
  }

  auto finish = [&](const exact::Vec3q& dq, double mass) {
    verdict.separable = true;
    verdict.witness_mass = std::max(verdict.witness_mass, mass);
    Point w = to_point(dq, dim);
    if (direction_valid(scenarios, threshold, s, safe, pruned, exact::to_q3(w)))
      verdict.witness_direction = w;
    return verdict;
  };

  if (items.empty()) {
    if (required_total == 0 && threshold <= kMassSlack) {
      exact::Vec3q d{Q(1), Q(0), Q(0)};
      return finish(d, 0.0);
    }
    return verdict;
  }

  if (dim == 2) {
    exact::Vec3q zaxis{Q(0), Q(0), Q(1)};
    SweepOutcome sw = sweep_in_plane(zaxis, items, threshold, required_total);
    verdict.witness_mass = sw.best_mass;
    if (sw.found) return finish(sw.dir, sw.best_mass);
    return verdict;
  }

  // dim == 3. Rank-1 special case: all difference vectors parallel.
  bool all_parallel = true;
  for (const SweepItem& it : items)
    if (!exact::is_zero(exact::cross(items[0].v, it.v))) {
      all_parallel = false;
      break;
    }
  if (all_parallel) {
    for (const exact::Vec3q& d : {items[0].v, negate(items[0].v)}) {
      double mass = 0.0;
      int req = 0;
      for (const SweepItem& it : items) {
        if (exact::sign(exact::dot(d, it.v)) > 0) {
          mass += it.mass;
          if (it.required) ++req;
        }
      }
      verdict.witness_mass = std::max(verdict.witness_mass, mass);
      if (req == required_total && mass >= threshold - kMassSlack)
        return finish(d, mass);
    }
    return verdict;
  }

  // General position: every optimal open halfspace can be rotated onto a
  // direction orthogonal to two difference vectors; enumerate those plane
  // normals and resolve the on-plane points with an in-plane sweep.
  long clock_probe = 0;
  for (size_t i = 0; i < items.size(); ++i) {
    for (size_t j = i + 1; j < items.size(); ++j) {
      if (deadline && (++clock_probe & 63) == 0 &&
          std::chrono::steady_clock::now() > *deadline) {
        verdict.timed_out = true;
        return verdict;
      }
      exact::Vec3q nn0 = exact::cross(items[i].v, items[j].v);
      if (exact::is_zero(nn0)) continue;
      for (const exact::Vec3q& nn : {nn0, negate(nn0)}) {
        double base_mass = 0.0;
        int req_plus = 0, req_zero = 0;
        bool req_negative = false;
        std::vector<SweepItem> in_plane;
        for (const SweepItem& it : items) {
          int sg = exact::sign(exact::dot(nn, it.v));
          if (sg > 0) {
            base_mass += it.mass;
            if (it.required) ++req_plus;
          } else if (sg == 0) {
            in_plane.push_back(it);
            if (it.required) ++req_zero;
          } else if (it.required) {
            req_negative = true;
            break;
          }
        }
        if (req_negative) continue;
        SweepOutcome sw =
            sweep_in_plane(nn, in_plane, threshold - base_mass, req_zero);
        verdict.witness_mass = std::max(verdict.witness_mass, base_mass + sw.best_mass);
        if (!sw.found) continue;
        // d = nn + delta * t stays valid for small enough rational delta:
        // strictly positive items keep their sign, on-plane items follow t.
        exact::Q delta(1, 1024);
        for (int halvings = 0; halvings < 256; ++halvings, delta /= 2) {
          exact::Vec3q d{nn[0] + delta * sw.dir[0], nn[1] + delta * sw.dir[1],
                         nn[2] + delta * sw.dir[2]};
          if (direction_valid(scenarios, threshold, s, safe, pruned, d))
            return finish(d, base_mass + sw.best_mass);
        }
      }
    }
  }
  return verdict;
}

}  // namespace ccp
