#pragma once

// Presolve pipeline: partitions scenarios into safe (always selected at some
// optimum), pruned (never needed at any optimum), and selectable, while
// maintaining valid lower/upper bounds, tightened big-M constants, and
// hull-based valid inequalities. Every fixing is value preserving: solving
// the restricted model yields the same optimal value as the full model.

#include <algorithm>
#include <chrono>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ccp/geometry.hpp"
#include "ccp/instance.hpp"
#include "ccp/projection.hpp"
#include "ccp/separability.hpp"
#include "ccp/types.hpp"

namespace ccp {

struct PartitionState {
  IndexSet safe;    // indices every kept optimum selects
  IndexSet pruned;  // indices some optimum avoids entirely
  bool selectable(int s) const {
    return !set_contains(safe, s) && !set_contains(pruned, s);
  }
  IndexSet selectable_set(int n) const {
    IndexSet out;
    for (int s = 0; s < n; ++s)
      if (selectable(s)) out.push_back(s);
    return out;
  }
};

struct Bounds {
  double lower = -kInf;
  double upper = kInf;
  std::optional<Point> incumbent;  // chance-feasible point achieving upper
};

struct ValidInequality {
  enum class Kind { hull_induction, hull_cut };
  // hull_induction: z_target >= sum_{v in vertex_set} z_v - rhs
  // hull_cut:       sum_{v in vertex_set} z_v <= rhs
  Kind kind = Kind::hull_induction;
  int target = -1;  // hull_induction only
  IndexSet vertex_set;
  int rhs = 0;  // |vertex_set| - 1 in both encodings
};

/// Provenance of one fixing, replayable without rerunning the pipeline:
/// the recorded snapshot sets plus the bound value reproduce the decision.
struct Certificate {
  std::string kind;  // singleton_prune | non_separability | hull_expansion |
                     // non_positivity | strict_positivity | sub_optimality
  int s = -1;
  bool fixes_safe = false;  // true: added to safe, false: added to pruned
  double value = 0.0;       // backing bound or restriction value
  double cap = kInf;        // upper bound in force at fixing time
  IndexSet basis;           // safe-set snapshot (or hull support)
  IndexSet pruned_basis;    // pruned-set snapshot where relevant
};

struct PresolveConfig {
  double separability_time_limit = -1.0;  // seconds; < 0 picks 60 (p=2) / 120 (p=3)
  bool enable_separability = true;
  bool enable_hull_expansion = true;
  bool enable_suboptimality = true;
  bool enable_positivity = true;
  bool enable_inequalities = true;
};

struct PresolveReport {
  PartitionState partition;
  Bounds bounds;
  std::vector<BigMBound> big_m;  // per selectable scenario, tightened
  std::vector<ValidInequality> inequalities;
  std::vector<Certificate> certificates;
  std::vector<std::pair<std::string, double>> timings_ms;
  bool optimal_mass = false;  // safe mass reached the threshold: bounds tight
};

namespace presolve_detail {

inline double safe_mass(const PBPInstance& inst, const PartitionState& part) {
  return inst.scenarios.mass(part.safe);
}

inline bool optimal_mass_reached(const PBPInstance& inst, const PartitionState& part) {
  return safe_mass(inst, part) >= inst.chance_threshold() - kMassSlack;
}

/// Objective cap used when the incumbent value bounds a region. Upper bounds
/// come from projection iterates that are feasible only within kFeasTol, so
/// the true optimum can exceed the recorded bound by a matching hair; the
/// inflation keeps {x : F(x) <= cap} provably containing an optimal point.
inline double inflated_cap(double upper) {
  if (!std::isfinite(upper)) return upper;
  return upper + 1e-6 * std::max(1.0, std::abs(upper));
}

}  // namespace presolve_detail

/// Stage 1: solve every singleton restriction. Yields the trivial lower
/// bound min_s nu({s}), an upper bound from any chance-feasible singleton
/// minimizer, and the first prunes: nu({s}) above the upper bound means no
/// optimum ever needs scenario s.
inline std::pair<Bounds, PartitionState> singleton_bounds(
    const PBPInstance& inst, std::vector<Certificate>* certs = nullptr) {
  const int n = inst.scenarios.size();
  Bounds bounds;
  PartitionState part;

  std::vector<double> nu(static_cast<size_t>(n), 0.0);
  std::vector<bool> known(static_cast<size_t>(n), false);
  std::vector<std::optional<Point>> minimizer(static_cast<size_t>(n));
  for (int s = 0; s < n; ++s) {
    ProjectionResult pr = project(inst, IndexSet{s});
    if (pr.status == ProjStatus::feasible) {
      nu[static_cast<size_t>(s)] = pr.value;
      // Only exact values feed the lower bound and the prunes: an iterative
      // value can overshoot the true restriction value, which a bound used
      // against other scenarios must never do. The minimizer still competes
      // for the upper bound regardless.
      known[static_cast<size_t>(s)] = pr.value_exact;
      minimizer[static_cast<size_t>(s)] = pr.point;
    } else if (pr.status == ProjStatus::empty && pr.empty_certified) {
      nu[static_cast<size_t>(s)] = kInf;
      known[static_cast<size_t>(s)] = true;
    }
    // Unknown (stall or iteration cap): contributes the trivial 0 to the
    // lower bound and never triggers a prune.
  }

  double lower = kInf;
  for (int s = 0; s < n; ++s)
    lower = std::min(lower, known[static_cast<size_t>(s)] ? nu[static_cast<size_t>(s)] : 0.0);
  bounds.lower = lower;

  for (int s = 0; s < n; ++s) {
    if (!minimizer[static_cast<size_t>(s)]) continue;
    if (nu[static_cast<size_t>(s)] >= bounds.upper) continue;
    if (chance_check(inst, *minimizer[static_cast<size_t>(s)]).feasible) {
      bounds.upper = nu[static_cast<size_t>(s)];
      bounds.incumbent = minimizer[static_cast<size_t>(s)];
    }
  }

  for (int s = 0; s < n; ++s) {
    if (!known[static_cast<size_t>(s)]) continue;
    if (nu[static_cast<size_t>(s)] > bounds.upper + kValueSlack) {
      part.pruned = set_insert(std::move(part.pruned), s);
      if (certs)
        certs->push_back(Certificate{"singleton_prune", s, false,
                                     nu[static_cast<size_t>(s)], bounds.upper, {}, {}});
    }
  }
  return {bounds, part};
}

/// Stage 2: non-separability induction. A scenario no sound selection can
/// strictly separate is inside every sound hull, hence free to select: safe.
/// Rounds run on partition snapshots until fixpoint or the time budget ends;
/// a timeout leaves a valid partial partition.
inline PartitionState safe_by_separability(const PBPInstance& inst, PartitionState part,
                                           double time_limit_sec,
                                           std::vector<Certificate>* certs = nullptr) {
  const int n = inst.scenarios.size();
  const auto deadline = std::chrono::steady_clock::now() +
                        std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                            std::chrono::duration<double>(time_limit_sec));
  while (true) {
    if (presolve_detail::optimal_mass_reached(inst, part)) return part;
    const PartitionState snapshot = part;
    IndexSet added;
    bool out_of_time = false;
    for (int s = 0; s < n && !out_of_time; ++s) {
      if (!snapshot.selectable(s)) continue;
      if (std::chrono::steady_clock::now() > deadline) {
        out_of_time = true;
        break;
      }
      SeparabilityVerdict v =
          separability_check(inst.scenarios, s, snapshot.safe, snapshot.pruned,
                             inst.tau, &deadline);
      if (v.timed_out) {
        out_of_time = true;
        break;
      }
      if (!v.separable) {
        added = set_insert(std::move(added), s);
        if (certs)
          certs->push_back(Certificate{"non_separability", s, true, 0.0, kInf,
                                       snapshot.safe, snapshot.pruned});
      }
    }
    part.safe = set_union(part.safe, added);
    if (added.empty() || out_of_time) return part;
  }
}

/// Stage 3a: everything inside the convex hull of the safe points is safe
/// too. A pruned point inside that hull contradicts value preservation and
/// is surfaced as an inconsistency rather than patched over.
inline PartitionState expand_safe_hull(const PBPInstance& inst, PartitionState part,
                                       std::vector<Certificate>* certs = nullptr) {
  if (part.safe.empty()) return part;
  const IndexSet snapshot = part.safe;
  IndexSet enclosed = enclosed_indices(inst.scenarios.xi, snapshot);
  for (int s : enclosed) {
    if (set_contains(snapshot, s)) continue;
    if (set_contains(part.pruned, s))
      throw inconsistency_error(
          "expand_safe_hull: pruned scenario lies inside the safe hull");
    part.safe = set_insert(std::move(part.safe), s);
    if (certs)
      certs->push_back(Certificate{"hull_expansion", s, true, 0.0, kInf, snapshot, {}});
  }
  return part;
}

/// Stage 3b: sub-optimality exclusion. With a non-threshold safe set, every
/// sound selection extends the safe set by some selectable scenario, so
/// nu(safe+{s}) above the upper bound rules s out, and the minimum over all
/// s is a valid lower bound. Chance-feasible restriction minimizers improve
/// the upper bound first, making the prunes as strong as possible.
inline std::pair<PartitionState, Bounds> suboptimality_pass(
    const PBPInstance& inst, PartitionState part, Bounds bounds,
    std::vector<Certificate>* certs = nullptr) {
  if (presolve_detail::optimal_mass_reached(inst, part)) return {part, bounds};
  const int n = inst.scenarios.size();
  const PartitionState snapshot = part;

  struct Eval {
    int s;
    double value;  // kInf when certified empty
    bool exact;    // value trusted for the lower bound and prunes
    std::optional<Point> point;
  };
  std::vector<Eval> evals;
  bool all_known = true;
  for (int s = 0; s < n; ++s) {
    if (!snapshot.selectable(s)) continue;
    ProjectionResult pr = project(inst, set_insert(snapshot.safe, s));
    if (pr.status == ProjStatus::feasible) {
      evals.push_back(Eval{s, pr.value, pr.value_exact, pr.point});
      // An iterative value can overshoot the true restriction value; only
      // exact ones may bound or prune, though the point still competes for
      // the upper bound.
      all_known = all_known && pr.value_exact;
    } else if (pr.status == ProjStatus::empty && pr.empty_certified) {
      evals.push_back(Eval{s, kInf, true, std::nullopt});
    } else {
      all_known = false;  // unknown: s stays selectable, lower update off
    }
  }

  for (const Eval& e : evals) {
    if (!e.point || e.value >= bounds.upper) continue;
    if (chance_check(inst, *e.point).feasible) {
      bounds.upper = e.value;
      bounds.incumbent = e.point;
    }
  }

  if (all_known && !evals.empty()) {
    double lb = kInf;
    for (const Eval& e : evals) lb = std::min(lb, e.value);
    bounds.lower = std::max(bounds.lower, lb);
  }

  for (const Eval& e : evals) {
    if (e.exact && e.value > bounds.upper + kValueSlack) {
      part.pruned = set_insert(std::move(part.pruned), e.s);
      if (certs)
        certs->push_back(Certificate{"sub_optimality", e.s, false, e.value,
                                     bounds.upper, snapshot.safe, {}});
    }
  }
  return {part, bounds};
}

/// Stage 3c: positivity certificates over the interval relaxation of the
/// relevant region. A nonpositive big-M makes the constraint vacuous there
/// (safe); a strictly positive distance lower bound makes it unsatisfiable
/// there (pruned). Throws inconsistency_error when the relaxation is
/// certifiably empty; the caller decides whether that means infeasibility.
inline PartitionState positivity_pass(const PBPInstance& inst, PartitionState part,
                                      const Bounds& bounds,
                                      std::vector<Certificate>* certs = nullptr) {
  const int n = inst.scenarios.size();
  const PartitionState snapshot = part;
  const double cap = presolve_detail::inflated_cap(bounds.upper);
  for (int s = 0; s < n; ++s) {
    if (!snapshot.selectable(s)) continue;
    BigMBound bm = big_m(inst, s, snapshot.safe, cap);
    if (bm.value <= 0.0) {
      part.safe = set_insert(std::move(part.safe), s);
      if (certs)
        certs->push_back(Certificate{"non_positivity", s, true, bm.value,
                                     bounds.upper, snapshot.safe, {}});
      continue;
    }
    double lb = min_distance_lb(inst, s, snapshot.safe, cap);
    if (lb > 0.0) {
      part.pruned = set_insert(std::move(part.pruned), s);
      if (certs)
        certs->push_back(Certificate{"strict_positivity", s, false, lb,
                                     bounds.upper, snapshot.safe, {}});
    }
  }
  return part;
}

/// Hull-based valid inequalities from two free seed subsets: the safe set
/// (once full-dimensional) and everything not pruned. For a seed S with hull
/// vertices V(S) and enclosed scenarios N(S): selecting all of V(S) lets any
/// point satisfying those constraints satisfy every enclosed one (balls are
/// convex), so z_t for t in N(S)\V(S) may be induced to 1. The cardinality
/// cut on V(S) applies only to equal-mass instances with enough enclosed
/// mass that some optimal selection can always drop a vertex; it is skipped
/// when the vertex set is entirely safe (dropping is then impossible) or
/// the safe set already reached the threshold.
inline std::vector<ValidInequality> generate_inequalities(const PBPInstance& inst,
                                                          const PartitionState& part,
                                                          double tau) {
  std::vector<ValidInequality> out;
  const ScenarioSet& sc = inst.scenarios;
  const int n = sc.size();
  const double threshold = sc.total_mass() - tau;
  const bool optimal_mass = sc.mass(part.safe) >= threshold - kMassSlack;

  std::vector<IndexSet> seeds;
  if (static_cast<int>(part.safe.size()) >= inst.p + 1) seeds.push_back(part.safe);
  IndexSet not_pruned;
  for (int s = 0; s < n; ++s)
    if (!set_contains(part.pruned, s)) not_pruned.push_back(s);
  if (!not_pruned.empty() && not_pruned != (seeds.empty() ? IndexSet{} : seeds[0]))
    seeds.push_back(not_pruned);

  for (const IndexSet& S : seeds) {
    IndexSet V = vertex_indices(sc.xi, S);
    IndexSet NN = enclosed_indices(sc.xi, S);
    for (int t : NN) {
      if (set_contains(V, t)) continue;
      ValidInequality vi;
      vi.kind = ValidInequality::Kind::hull_induction;
      vi.target = t;
      vi.vertex_set = V;
      vi.rhs = static_cast<int>(V.size()) - 1;
      out.push_back(std::move(vi));
    }
    if (sc.equiprobable() && !optimal_mass && !set_is_subset(V, part.safe) &&
        sc.mass(NN) >= threshold + sc.pi[0] - kMassSlack) {
      ValidInequality vi;
      vi.kind = ValidInequality::Kind::hull_cut;
      vi.vertex_set = V;
      vi.rhs = static_cast<int>(V.size()) - 1;
      out.push_back(std::move(vi));
    }
  }
  return out;
}

inline nlohmann::json report_to_json(const PresolveReport& rep) {
  nlohmann::json j;
  auto num = [](double v) {
    return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json();
  };
  auto idxs = [](const IndexSet& s) {
    nlohmann::json a = nlohmann::json::array();
    for (int v : s) a.push_back(v + 1);
    return a;
  };
  j["safe"] = idxs(rep.partition.safe);
  j["pruned"] = idxs(rep.partition.pruned);
  j["lower"] = num(rep.bounds.lower);
  j["upper"] = num(rep.bounds.upper);
  nlohmann::json bm = nlohmann::json::array();
  for (const BigMBound& b : rep.big_m) bm.push_back({{"s", b.s + 1}, {"value", num(b.value)}});
  j["big_m"] = bm;
  nlohmann::json ineq = nlohmann::json::array();
  for (const ValidInequality& vi : rep.inequalities) {
    nlohmann::json e;
    e["kind"] = vi.kind == ValidInequality::Kind::hull_induction ? "hull_induction" : "hull_cut";
    e["target"] = vi.target >= 0 ? nlohmann::json(vi.target + 1) : nlohmann::json();
    e["vertex_set"] = idxs(vi.vertex_set);
    e["rhs"] = vi.rhs;
    ineq.push_back(std::move(e));
  }
  j["inequalities"] = ineq;
  nlohmann::json certs = nlohmann::json::array();
  for (const Certificate& c : rep.certificates) {
    nlohmann::json e;
    e["kind"] = c.kind;
    e["s"] = c.s + 1;
    e["fixes"] = c.fixes_safe ? "safe" : "pruned";
    e["value"] = num(c.value);
    e["cap"] = num(c.cap);
    e["basis"] = idxs(c.basis);
    e["pruned_basis"] = idxs(c.pruned_basis);
    certs.push_back(std::move(e));
  }
  j["certificates"] = certs;
  nlohmann::json tm;
  for (const auto& [name, ms] : rep.timings_ms) tm[name] = ms;
  j["timings_ms"] = tm;
  return j;
}

/// Full pipeline in stage order: singleton bounds, separability rounds,
/// hull expansion paired with sub-optimality exclusion, positivity passes,
/// big-M tightening, inequality generation. Once the safe set's mass meets
/// the threshold the bounds close (nu(safe) is the optimum) and the
/// exclusion stage is skipped.
inline PresolveReport run_pipeline(const PBPInstance& inst, const PresolveConfig& config = {}) {
  using clock = std::chrono::steady_clock;
  PresolveReport rep;
  const auto t_start = clock::now();
  auto stage_ms = [](clock::time_point a, clock::time_point b) {
    return std::chrono::duration<double, std::milli>(b - a).count();
  };

  // Bounds come from independent projections; tiny float noise may cross
  // them. Within noise the tighter value wins, beyond it something is
  // genuinely unsound and gets surfaced.
  auto reconcile = [&]() {
    Bounds& b = rep.bounds;
    if (b.lower > b.upper) {
      if (b.lower > b.upper + 1e-6 * std::max(1.0, std::abs(b.upper)))
        throw inconsistency_error("run_pipeline: lower bound crossed upper bound");
      b.lower = b.upper;
    }
  };

  auto t0 = clock::now();
  std::tie(rep.bounds, rep.partition) = singleton_bounds(inst, &rep.certificates);
  reconcile();
  rep.timings_ms.emplace_back("singleton", stage_ms(t0, clock::now()));

  if (config.enable_separability) {
    t0 = clock::now();
    double limit = config.separability_time_limit >= 0.0
                       ? config.separability_time_limit
                       : (inst.p == 3 ? 120.0 : 60.0);
    rep.partition = safe_by_separability(inst, rep.partition, limit, &rep.certificates);
    rep.timings_ms.emplace_back("separability", stage_ms(t0, clock::now()));
  }

  if (config.enable_hull_expansion) {
    t0 = clock::now();
    rep.partition = expand_safe_hull(inst, rep.partition, &rep.certificates);
    rep.timings_ms.emplace_back("hull_expansion", stage_ms(t0, clock::now()));
  }

  // Threshold shortcut: with enough safe mass the safe restriction is the
  // whole problem; its value closes both bounds.
  auto close_on_optimal_mass = [&]() {
    if (rep.optimal_mass || !presolve_detail::optimal_mass_reached(inst, rep.partition))
      return;
    rep.optimal_mass = true;
    ProjectionResult pr = project(inst, rep.partition.safe);
    if (pr.status == ProjStatus::feasible) {
      // The value is an upper bound at the projection point either way; as
      // a lower bound it is trusted only when exact, since an iterative
      // value can overshoot the true restriction value.
      if (pr.value_exact) rep.bounds.lower = std::max(rep.bounds.lower, pr.value);
      rep.bounds.upper = std::min(rep.bounds.upper, pr.value);
      rep.bounds.incumbent = pr.point;
    } else if (pr.status == ProjStatus::empty && pr.empty_certified) {
      if (rep.bounds.upper < kInf)
        throw inconsistency_error(
            "run_pipeline: threshold-mass safe set is infeasible yet an incumbent exists");
      rep.bounds.lower = rep.bounds.upper = kInf;
    }
    reconcile();
  };
  close_on_optimal_mass();

  bool infeasible_detected = rep.optimal_mass && rep.bounds.lower >= kInf;

  if (config.enable_suboptimality && !rep.optimal_mass && !infeasible_detected) {
    t0 = clock::now();
    std::tie(rep.partition, rep.bounds) =
        suboptimality_pass(inst, rep.partition, rep.bounds, &rep.certificates);
    reconcile();
    rep.timings_ms.emplace_back("suboptimality", stage_ms(t0, clock::now()));
  }

  if (config.enable_positivity && !infeasible_detected) {
    t0 = clock::now();
    try {
      rep.partition = positivity_pass(inst, rep.partition, rep.bounds, &rep.certificates);
    } catch (const inconsistency_error&) {
      if (rep.bounds.upper < kInf) throw;
      // Empty relevant region with no incumbent anywhere: no sound
      // selection is satisfiable, the instance is infeasible.
      rep.bounds.lower = rep.bounds.upper = kInf;
      infeasible_detected = true;
    }
    rep.timings_ms.emplace_back("positivity", stage_ms(t0, clock::now()));
    close_on_optimal_mass();
  }

  if (!infeasible_detected) {
    t0 = clock::now();
    try {
      const double cap = presolve_detail::inflated_cap(rep.bounds.upper);
      for (int s = 0; s < inst.scenarios.size(); ++s)
        if (rep.partition.selectable(s))
          rep.big_m.push_back(big_m(inst, s, rep.partition.safe, cap));
    } catch (const inconsistency_error&) {
      if (rep.bounds.upper < kInf) throw;
      rep.bounds.lower = rep.bounds.upper = kInf;
      rep.big_m.clear();
      infeasible_detected = true;
    }
    rep.timings_ms.emplace_back("big_m", stage_ms(t0, clock::now()));
  }

  if (config.enable_inequalities && !infeasible_detected) {
    t0 = clock::now();
    rep.inequalities = generate_inequalities(inst, rep.partition, inst.tau);
    rep.timings_ms.emplace_back("inequalities", stage_ms(t0, clock::now()));
  }

  rep.timings_ms.emplace_back("total", stage_ms(t_start, clock::now()));
  return rep;
}

}  // namespace ccp
