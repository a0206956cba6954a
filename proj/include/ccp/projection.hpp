#pragma once

// Convex oracle for regions of the form
//   box B_inf(0, R_bar)  intersect  balls B_n(center, radius).
// Euclidean projections onto the intersection run Dykstra's alternating
// scheme; single-ball projections are closed-form. Emptiness is certified
// either by interval enclosures or, for purely polyhedral regions (L1/Linf
// balls), by an exact rational feasibility test over the facet system.

#include <cmath>
#include <optional>
#include <vector>

#include "ccp/exact.hpp"
#include "ccp/instance.hpp"
#include "ccp/types.hpp"

namespace ccp {

struct Ball {
  Point center;
  double radius = 1.0;
  Norm norm = Norm::Linf;
};

/// Box plus a list of balls; the feasible region is their intersection.
struct Region {
  int dim = 2;
  double box_half_width = 1.0;
  std::vector<Ball> balls;
};

enum class ProjStatus { feasible, empty, max_iter };

struct ProjectionResult {
  Point point;
  double value = kInf;        // Euclidean distance from the start point
  ProjStatus status = ProjStatus::max_iter;
  bool empty_certified = false;  // emptiness proven exactly, not inferred
                                 // from a stalled iteration
  bool value_exact = false;      // point and value from the exact rational
                                 // route (rounded to double once)
};

/// Closed-form Euclidean projection of q onto B_n(center, radius).
/// Exact coordinate arithmetic for Linf (clamp), radial scaling for L2,
/// sorted soft-thresholding for L1.
inline Point project_ball(const Point& q, const Point& center, double radius,
                          Norm n) {
  Point v = q - center;
  switch (n) {
    case Norm::Linf: {
      Point r(q.dim);
      for (int i = 0; i < q.dim; ++i)
        r[i] = center[i] + std::clamp(v[i], -radius, radius);
      return r;
    }
    case Norm::L2: {
      double d = norm_of(v, Norm::L2);
      if (d <= radius) return q;
      return center + (radius / d) * v;
    }
    case Norm::L1: {
      if (norm_of(v, Norm::L1) <= radius) return q;
      // Find theta > 0 with sum_i max(|v_i| - theta, 0) = radius, then
      // shrink each coordinate toward zero by theta.
      std::array<double, 3> a{0.0, 0.0, 0.0};
      for (int i = 0; i < q.dim; ++i) a[static_cast<size_t>(i)] = std::abs(v[i]);
      std::sort(a.begin(), a.begin() + q.dim, std::greater<double>());
      double cum = 0.0, theta = 0.0;
      for (int k = 0; k < q.dim; ++k) {
        cum += a[static_cast<size_t>(k)];
        double t = (cum - radius) / (k + 1);
        if (k + 1 == q.dim || t >= a[static_cast<size_t>(k + 1)]) {
          theta = t;
          break;
        }
      }
      Point r(q.dim);
      for (int i = 0; i < q.dim; ++i) {
        double shrunk = std::max(std::abs(v[i]) - theta, 0.0);
        r[i] = center[i] + (v[i] < 0 ? -shrunk : shrunk);
      }
      return r;
    }
  }
  throw std::logic_error("unreachable norm tag");
}

inline Point project_box(const Point& q, double half_width) {
  Point r(q.dim);
  for (int i = 0; i < q.dim; ++i) r[i] = std::clamp(q[i], -half_width, half_width);
  return r;
}

/// Interval box [lo, hi], possibly empty.
struct IntervalBox {
  Point lo, hi;
  bool empty = false;
};

/// Coordinate-wise enclosure of the region: the box intersected with every
/// ball's bounding box ([center_i - r, center_i + r] for all ball norms).
/// Emptiness of this enclosure certifies emptiness of the region.
inline IntervalBox interval_enclosure(const Region& reg) {
  IntervalBox b;
  b.lo = Point(reg.dim);
  b.hi = Point(reg.dim);
  for (int i = 0; i < reg.dim; ++i) {
    b.lo[i] = -reg.box_half_width;
    b.hi[i] = reg.box_half_width;
  }
  for (const Ball& ball : reg.balls) {
    for (int i = 0; i < reg.dim; ++i) {
      b.lo[i] = std::max(b.lo[i], ball.center[i] - ball.radius);
      b.hi[i] = std::min(b.hi[i], ball.center[i] + ball.radius);
      if (b.lo[i] > b.hi[i]) {
        b.empty = true;
        return b;
      }
    }
  }
  return b;
}

/// Largest constraint excess at x: max over the box and all balls of
/// (distance to set boundary beyond feasibility), 0 when feasible.
inline double region_violation(const Region& reg, const Point& x) {
  double v = 0.0;
  for (int i = 0; i < reg.dim; ++i)
    v = std::max(v, std::abs(x[i]) - reg.box_half_width);
  for (const Ball& ball : reg.balls)
    v = std::max(v, distance(x, ball.center, ball.norm) - ball.radius);
  return v;
}

namespace proj_detail {

/// One linear constraint a . x <= b with exact rational coefficients.
struct QRow {
  std::array<exact::Q, 3> a{};
  exact::Q b;
};

/// Exact distance between two points in the L1 or Linf norm.
inline exact::Q q_norm_distance(const Point& u, const Point& v, Norm n, int dim) {
  exact::Q d = 0;
  for (int i = 0; i < dim; ++i) {
    exact::Q t = exact::Q(u[i]) - exact::Q(v[i]);
    if (sgn(t) < 0) t = -t;
    if (n == Norm::L1)
      d += t;
    else if (t > d)
      d = t;
  }
  return d;
}

/// Exact distance from c to the box [-w, w]^dim in the L1 or Linf norm.
inline exact::Q q_box_distance(const Point& c, double half_width, Norm n, int dim) {
  exact::Q w(half_width), d = 0;
  for (int i = 0; i < dim; ++i) {
    exact::Q t(c[i]);
    if (sgn(t) < 0) t = -t;
    t -= w;
    if (sgn(t) < 0) continue;
    if (n == Norm::L1)
      d += t;
    else if (t > d)
      d = t;
  }
  return d;
}

/// Facet inequalities of B_n(center, radius): 2*dim rows for Linf, 2^dim
/// sign patterns for L1. L2 balls have no linear description.
inline bool append_ball_rows(std::vector<QRow>& rows, const Ball& ball, int dim) {
  exact::Q r(ball.radius);
  if (ball.norm == Norm::Linf) {
    for (int i = 0; i < dim; ++i) {
      QRow hi, lo;
      hi.a[static_cast<size_t>(i)] = 1;
      hi.b = exact::Q(ball.center[i]) + r;
      lo.a[static_cast<size_t>(i)] = -1;
      lo.b = r - exact::Q(ball.center[i]);
      rows.push_back(std::move(hi));
      rows.push_back(std::move(lo));
    }
    return true;
  }
  if (ball.norm == Norm::L1) {
    for (int mask = 0; mask < (1 << dim); ++mask) {
      QRow row;
      row.b = r;
      for (int i = 0; i < dim; ++i) {
        int sigma = (mask >> i & 1) ? 1 : -1;
        row.a[static_cast<size_t>(i)] = sigma;
        row.b += sigma * exact::Q(ball.center[i]);
      }
      rows.push_back(std::move(row));
    }
    return true;
  }
  return false;
}

inline bool q_point_feasible(const std::vector<QRow>& rows,
                             const std::array<exact::Q, 3>& x, int dim) {
  for (const QRow& row : rows) {
    exact::Q lhs = 0;
    for (int i = 0; i < dim; ++i) lhs += row.a[static_cast<size_t>(i)] * x[static_cast<size_t>(i)];
    if (lhs > row.b) return false;
  }
  return true;
}

/// Row cap for building an exact facet system; beyond it the exact routes
/// are skipped entirely.
inline constexpr size_t kExactRowsMax = 1024;

/// Row cap for the exhaustive subset scan, the last-resort exact path.
inline constexpr size_t kExactScanMaxRows = 128;

/// Candidate-row cap for the first-tier refinement of a converged iterate.
inline constexpr size_t kRefineMaxActive = 12;

/// Warm-start rows admitted to the cutting pool besides the box rows.
inline constexpr size_t kPoolWarmMax = 16;

/// Pool size at which the cutting loop hands over to the exhaustive scan.
inline constexpr size_t kPoolCap = 48;

/// Exact facet system of a polyhedral region: box rows first, then ball
/// facets. Nullopt when no exact linear description exists (an L2 ball, an
/// unusable box width) or the system exceeds the row cap.
inline std::optional<std::vector<QRow>> region_rows(const Region& reg) {
  if (reg.dim != 2 && reg.dim != 3) return std::nullopt;
  if (!std::isfinite(reg.box_half_width) || reg.box_half_width < 0)
    return std::nullopt;
  for (const Ball& ball : reg.balls)
    if (ball.norm == Norm::L2 || !std::isfinite(ball.radius) || ball.radius < 0)
      return std::nullopt;
  std::vector<QRow> rows;
  for (int i = 0; i < reg.dim; ++i) {
    QRow hi, lo;
    hi.a[static_cast<size_t>(i)] = 1;
    hi.b = exact::Q(reg.box_half_width);
    lo.a[static_cast<size_t>(i)] = -1;
    lo.b = exact::Q(reg.box_half_width);
    rows.push_back(std::move(hi));
    rows.push_back(std::move(lo));
  }
  for (const Ball& ball : reg.balls)
    if (!append_ball_rows(rows, ball, reg.dim)) return std::nullopt;
  if (rows.size() > kExactRowsMax) return std::nullopt;
  return rows;
}

/// Cheap exact emptiness certificates: a ball separated from the box, or two
/// same-norm balls farther apart than the sum of their radii.
inline bool pairwise_separation_empty(const Region& reg) {
  if (reg.dim != 2 && reg.dim != 3) return false;
  if (!std::isfinite(reg.box_half_width)) return false;
  for (const Ball& ball : reg.balls) {
    if (ball.norm == Norm::L2 || !std::isfinite(ball.radius)) continue;
    if (q_box_distance(ball.center, reg.box_half_width, ball.norm, reg.dim) >
        exact::Q(ball.radius))
      return true;
  }
  for (size_t i = 0; i < reg.balls.size(); ++i)
    for (size_t j = i + 1; j < reg.balls.size(); ++j) {
      if (reg.balls[i].norm != reg.balls[j].norm ||
          reg.balls[i].norm == Norm::L2)
        continue;
      if (!std::isfinite(reg.balls[i].radius) ||
          !std::isfinite(reg.balls[j].radius))
        continue;
      exact::Q d = q_norm_distance(reg.balls[i].center, reg.balls[j].center,
                                   reg.balls[i].norm, reg.dim);
      if (d > exact::Q(reg.balls[i].radius) + exact::Q(reg.balls[j].radius))
        return true;
    }
  return false;
}

struct RowsProjection {
  bool found = false;
  std::array<exact::Q, 3> point{};
  exact::Q dist2;
};

/// First-hit KKT search: orthogonally project q onto the affine span of each
/// independent subset of at most dim rows drawn from cand, and accept a
/// candidate that has nonnegative multipliers and is exactly feasible for
/// every row. Any accepted point is the unique projection of q onto the row
/// region (KKT sufficiency for a strictly convex quadratic), so the first
/// hit ends the search. With cand covering all rows and a bounded region the
/// search is complete: the optimum's active normal cone reduces by
/// Caratheodory to an independent subset of size at most dim, so no hit
/// certifies emptiness.
inline RowsProjection kkt_candidate_search(const std::vector<QRow>& rows,
                                           const std::vector<size_t>& cand,
                                           int d,
                                           const std::array<exact::Q, 3>& q) {
  RowsProjection out;
  auto accept = [&](const std::array<exact::Q, 3>& x) {
    if (!q_point_feasible(rows, x, d)) return false;
    out.found = true;
    out.point = x;
    exact::Q d2 = 0;
    for (int i = 0; i < d; ++i) {
      exact::Q t = x[static_cast<size_t>(i)] - q[static_cast<size_t>(i)];
      d2 += t * t;
    }
    out.dist2 = d2;
    return true;
  };
  if (accept(q)) return out;

  const size_t nc = cand.size();
  std::array<exact::Q, 3> x{};
  for (size_t u = 0; u < nc; ++u) {
    const QRow& r = rows[cand[u]];
    exact::Q den = 0, num = -r.b;
    for (int c = 0; c < d; ++c) {
      den += r.a[static_cast<size_t>(c)] * r.a[static_cast<size_t>(c)];
      num += r.a[static_cast<size_t>(c)] * q[static_cast<size_t>(c)];
    }
    if (sgn(den) == 0) continue;
    exact::Q lam = num / den;
    if (sgn(lam) < 0) continue;
    for (int c = 0; c < d; ++c)
      x[static_cast<size_t>(c)] =
          q[static_cast<size_t>(c)] - lam * r.a[static_cast<size_t>(c)];
    if (accept(x)) return out;
  }
  for (size_t u = 0; u < nc; ++u)
    for (size_t v = u + 1; v < nc; ++v) {
      const auto& ai = rows[cand[u]].a;
      const auto& aj = rows[cand[v]].a;
      exact::Q g11 = exact::dot(ai, ai), g12 = exact::dot(ai, aj),
               g22 = exact::dot(aj, aj);
      exact::Q det = g11 * g22 - g12 * g12;
      if (sgn(det) == 0) continue;
      exact::Q r1 = exact::dot(ai, q) - rows[cand[u]].b;
      exact::Q r2 = exact::dot(aj, q) - rows[cand[v]].b;
      exact::Q l1 = (g22 * r1 - g12 * r2) / det;
      exact::Q l2 = (g11 * r2 - g12 * r1) / det;
      if (sgn(l1) < 0 || sgn(l2) < 0) continue;
      for (int c = 0; c < 3; ++c)
        x[static_cast<size_t>(c)] = q[static_cast<size_t>(c)] -
                                    l1 * ai[static_cast<size_t>(c)] -
                                    l2 * aj[static_cast<size_t>(c)];
      if (accept(x)) return out;
    }
  if (d == 3) {
    for (size_t u = 0; u < nc; ++u)
      for (size_t v = u + 1; v < nc; ++v)
        for (size_t w = v + 1; w < nc; ++w) {
          const auto& ai = rows[cand[u]].a;
          const auto& aj = rows[cand[v]].a;
          const auto& ak = rows[cand[w]].a;
          exact::Vec3q c0{ai[0], aj[0], ak[0]};
          exact::Vec3q c1{ai[1], aj[1], ak[1]};
          exact::Vec3q c2{ai[2], aj[2], ak[2]};
          exact::Q det = exact::dot(c0, exact::cross(c1, c2));
          if (sgn(det) == 0) continue;
          exact::Vec3q rhs{rows[cand[u]].b, rows[cand[v]].b, rows[cand[w]].b};
          x[0] = exact::dot(rhs, exact::cross(c1, c2)) / det;
          x[1] = exact::dot(c0, exact::cross(rhs, c2)) / det;
          x[2] = exact::dot(c0, exact::cross(c1, rhs)) / det;
          // multipliers: solve [ai aj ak] l = q - x; the column matrix is
          // the transpose of the vertex system, so its determinant is det
          exact::Vec3q g{q[0] - x[0], q[1] - x[1], q[2] - x[2]};
          exact::Q l1 = exact::dot(g, exact::cross(aj, ak)) / det;
          exact::Q l2 = exact::dot(ai, exact::cross(g, ak)) / det;
          exact::Q l3 = exact::dot(ai, exact::cross(aj, g)) / det;
          if (sgn(l1) < 0 || sgn(l2) < 0 || sgn(l3) < 0) continue;
          if (accept(x)) return out;
        }
  }
  return out;
}

/// Exact Euclidean projection onto a polyhedral region, or certified
/// emptiness. Three tiers after the cheap separation certificates:
/// (1) KKT verification over the rows nearly active at the warm iterate;
/// (2) a cutting loop that projects onto a growing pool of rows seeded with
///     the box and warm near-active rows, where a pool optimum feasible for
///     every row is the global optimum and an infeasible pool subproblem
///     certifies emptiness (the pool region contains the full region);
/// (3) an exhaustive subset scan for small systems.
/// Nullopt when the region has no facet description or every tier gives up.
inline std::optional<ProjectionResult> exact_polyhedral_projection(
    const Region& reg, const Point& start, const Point* warm) {
  auto emptied = [] {
    ProjectionResult res;
    res.status = ProjStatus::empty;
    res.empty_certified = true;
    res.value = kInf;
    return res;
  };
  if (pairwise_separation_empty(reg)) return emptied();
  std::optional<std::vector<QRow>> rows_opt = region_rows(reg);
  if (!rows_opt) return std::nullopt;
  const std::vector<QRow>& rows = *rows_opt;
  const int d = reg.dim;
  const size_t m = rows.size();

  std::array<exact::Q, 3> q{};
  for (int i = 0; i < d; ++i) q[static_cast<size_t>(i)] = exact::Q(start[i]);

  auto finish = [&](const RowsProjection& rp) {
    ProjectionResult res;
    res.status = ProjStatus::feasible;
    res.value_exact = true;
    res.point = Point(d);
    for (int i = 0; i < d; ++i)
      res.point[i] = rp.point[static_cast<size_t>(i)].get_d();
    res.value = std::sqrt(rp.dist2.get_d());
    return res;
  };

  // Residuals at the warm iterate guide candidate selection; they are only
  // heuristics, every acceptance downstream is exact.
  std::vector<std::pair<double, size_t>> resid;
  if (warm && warm->dim == d) {
    resid.reserve(m);
    for (size_t i = 0; i < m; ++i) {
      double lhs = 0.0;
      for (int c = 0; c < d; ++c)
        lhs += rows[i].a[static_cast<size_t>(c)].get_d() * (*warm)[c];
      resid.emplace_back(std::abs(lhs - rows[i].b.get_d()), i);
    }
    std::sort(resid.begin(), resid.end());
  }

  std::vector<size_t> cand;
  for (const auto& pr : resid) {
    if (cand.size() >= kRefineMaxActive) break;
    if (pr.first <= 1e-6 * std::max(1.0, std::abs(rows[pr.second].b.get_d())))
      cand.push_back(pr.second);
  }
  RowsProjection tier1 = kkt_candidate_search(rows, cand, d, q);
  if (tier1.found) return finish(tier1);

  std::vector<QRow> pool;
  std::vector<size_t> pool_cand;
  std::vector<char> in_pool(m, 0);
  auto add_row = [&](size_t i) {
    if (in_pool[i]) return;
    in_pool[i] = 1;
    pool_cand.push_back(pool.size());
    pool.push_back(rows[i]);
  };
  for (size_t i = 0; i < 2 * static_cast<size_t>(d); ++i) add_row(i);
  size_t warm_added = 0;
  for (const auto& pr : resid) {
    if (warm_added >= kPoolWarmMax) break;
    if (pr.first <= 1e-3 * std::max(1.0, std::abs(rows[pr.second].b.get_d()))) {
      add_row(pr.second);
      ++warm_added;
    }
  }
  while (pool.size() <= kPoolCap) {
    RowsProjection sub = kkt_candidate_search(pool, pool_cand, d, q);
    if (!sub.found) return emptied();
    bool violated = false;
    exact::Q worst;
    size_t worst_i = 0;
    for (size_t i = 0; i < m; ++i) {
      if (in_pool[i]) continue;
      exact::Q lhs = 0;
      for (int c = 0; c < d; ++c)
        lhs += rows[i].a[static_cast<size_t>(c)] * sub.point[static_cast<size_t>(c)];
      exact::Q v = lhs - rows[i].b;
      if (sgn(v) > 0 && (!violated || v > worst)) {
        violated = true;
        worst = v;
        worst_i = i;
      }
    }
    if (!violated) return finish(sub);
    add_row(worst_i);
  }

  if (m <= kExactScanMaxRows) {
    std::vector<size_t> all(m);
    for (size_t i = 0; i < m; ++i) all[i] = i;
    RowsProjection rp = kkt_candidate_search(rows, all, d, q);
    if (rp.found) return finish(rp);
    return emptied();
  }
  return std::nullopt;
}

}  // namespace proj_detail

inline constexpr int kDykstraMaxCycles = 10000;
inline constexpr double kDykstraConvergence = 1e-10;
inline constexpr double kDykstraStallDisplacement = 1e-12;
inline constexpr double kDykstraStallViolation = 1e-6;

/// Euclidean projection of start onto the region via Dykstra's alternating
/// projections. When the iteration stalls with persistent violation or hits
/// the cycle cap, the exact polyhedral projection settles the call outright:
/// certified emptiness or the exact minimizer. Only regions outside the
/// exact fallback's reach (an L2 ball, an oversized system) still report an
/// uncertified empty or max_iter.
inline ProjectionResult project_region(const Region& reg, const Point& start) {
  ProjectionResult res;
  IntervalBox enc = interval_enclosure(reg);
  if (enc.empty) {
    res.status = ProjStatus::empty;
    res.empty_certified = true;
    res.value = kInf;
    return res;
  }

  const size_t m = reg.balls.size() + 1;
  std::vector<Point> corr(m, Point(reg.dim));
  Point x = start;
  Point prev_cycle_end = start;

  for (int cycle = 0; cycle < kDykstraMaxCycles; ++cycle) {
    Point y = x + corr[0];
    Point xn = project_box(y, reg.box_half_width);
    corr[0] = y - xn;
    x = xn;
    for (size_t k = 0; k < reg.balls.size(); ++k) {
      y = x + corr[k + 1];
      xn = project_ball(y, reg.balls[k].center, reg.balls[k].radius,
                        reg.balls[k].norm);
      corr[k + 1] = y - xn;
      x = xn;
    }
    double disp = norm_of(x - prev_cycle_end, Norm::Linf);
    prev_cycle_end = x;
    double viol = region_violation(reg, x);
    if (disp < kDykstraConvergence && viol <= kFeasTol) {
      // Displacement-based stopping can sit far from the optimum along
      // nearly parallel facets; the exact projection settles the value.
      if (auto exact_res = proj_detail::exact_polyhedral_projection(reg, start, &x))
        return *exact_res;
      res.point = x;
      res.value = norm_of(x - start, Norm::L2);
      res.status = ProjStatus::feasible;
      return res;
    }
    if (disp < kDykstraStallDisplacement && viol > kDykstraStallViolation) {
      if (auto exact_res = proj_detail::exact_polyhedral_projection(reg, start, &x))
        return *exact_res;
      res.status = ProjStatus::empty;
      res.empty_certified = false;
      res.value = kInf;
      return res;
    }
  }
  if (auto exact_res = proj_detail::exact_polyhedral_projection(reg, start, &x))
    return *exact_res;
  res.status = ProjStatus::max_iter;
  return res;
}

/// Region X(S): the box plus the scenario balls selected by S.
inline Region scenario_region(const PBPInstance& inst, const IndexSet& S) {
  Region reg;
  reg.dim = inst.p;
  reg.box_half_width = inst.R_bar;
  reg.balls.reserve(S.size());
  for (int s : S)
    reg.balls.push_back(
        Ball{inst.scenarios.xi[static_cast<size_t>(s)], inst.R, inst.o_tilde});
  return reg;
}

/// nu(S): Euclidean projection of x_bar onto X(S). The objective norm must
/// be L2; other objective norms are accepted by the data model but not by
/// this oracle.
inline ProjectionResult project(const PBPInstance& inst, const IndexSet& S) {
  if (inst.o != Norm::L2)
    throw std::invalid_argument(
        "projection oracle supports only the L2 objective norm");
  return project_region(scenario_region(inst, S), inst.x_bar);
}

/// Interval enclosure of {x in X(safe) : ||x - x_bar||_o <= f_cap}. The
/// objective cap contributes the enclosure [x_bar_i - f_cap, x_bar_i + f_cap]
/// (valid for L1, L2 and Linf objectives alike).
inline IntervalBox bounding_box(const PBPInstance& inst, const IndexSet& safe,
                                double f_cap) {
  Region reg = scenario_region(inst, safe);
  if (std::isfinite(f_cap))
    reg.balls.push_back(Ball{inst.x_bar, f_cap, Norm::Linf});
  return interval_enclosure(reg);
}

struct BigMBound {
  int s = -1;
  double value = kInf;
};

/// Upper bound on max { ||x - xi_s||_ot - R } over the bounding box of
/// {x in X(safe) : F(x) <= f_cap}, evaluated in closed form coordinate-wise.
/// A nonpositive value certifies the scenario constraint can never be
/// violated there. Throws when the bounding box is empty: with a sound
/// (safe, f_cap) context the region contains an optimal point.
inline BigMBound big_m(const PBPInstance& inst, int s, const IndexSet& safe,
                       double f_cap) {
  IntervalBox box = bounding_box(inst, safe, f_cap);
  if (box.empty)
    throw inconsistency_error(
        "big_m: empty bounding box under a certified-sound context");
  const Point& xi = inst.scenarios.xi[static_cast<size_t>(s)];
  double value = 0.0;
  if (inst.o_tilde == Norm::L1) {
    for (int i = 0; i < inst.p; ++i)
      value += std::max(std::abs(box.lo[i] - xi[i]), std::abs(box.hi[i] - xi[i]));
  } else {
    for (int i = 0; i < inst.p; ++i)
      value = std::max(
          value, std::max(std::abs(box.lo[i] - xi[i]), std::abs(box.hi[i] - xi[i])));
  }
  return BigMBound{s, value - inst.R};
}

/// Safety margin subtracted from distance lower bounds to absorb the finite
/// convergence tolerance of the projection iteration.
inline constexpr double kDistanceLbSafety = 1e-8;

/// Lower bound on min { ||x - xi_s||_ot - R } over
/// {x in X(safe) : F(x) <= f_cap}, from the Euclidean distance of xi_s to
/// that region and the norm equivalence ||v||_1 >= ||v||_2,
/// ||v||_inf >= ||v||_2 / sqrt(p). The objective cap enters as its Linf
/// relaxation (a superset for every objective norm), which keeps the region
/// polyhedral; the certificate is issued only from an exactly computed
/// distance, since an iterative value can overshoot. A positive value
/// certifies the scenario ball cannot intersect the capped region. Returns
/// -inf when no exact value is available.
inline double min_distance_lb(const PBPInstance& inst, int s, const IndexSet& safe,
                              double f_cap) {
  Region reg = scenario_region(inst, safe);
  if (std::isfinite(f_cap)) reg.balls.push_back(Ball{inst.x_bar, f_cap, Norm::Linf});
  const Point& xi = inst.scenarios.xi[static_cast<size_t>(s)];
  ProjectionResult r = project_region(reg, xi);
  if (r.status == ProjStatus::empty && r.empty_certified)
    throw inconsistency_error(
        "min_distance_lb: region certified empty under a sound context");
  if (r.status != ProjStatus::feasible || !r.value_exact) return -kInf;
  double kappa = inst.o_tilde == Norm::L1 ? 1.0 : 1.0 / std::sqrt(double(inst.p));
  return r.value * kappa - inst.R - kDistanceLbSafety;
}

}  // namespace ccp
