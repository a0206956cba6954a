#pragma once

// Exact branch and bound over the scenario switching variables. Nodes carry
// partial selections (ones/zeros); the node bound is the restriction value
// nu(ones), valid because adding constraints never shrinks a projection
// distance. Presolve fixings seed the root, its inequalities drive unit
// propagation, and its bounds seed the incumbent.

#include <algorithm>
#include <chrono>
#include <optional>
#include <queue>
#include <stdexcept>
#include <vector>

#include "ccp/instance.hpp"
#include "ccp/minimal_subsets.hpp"
#include "ccp/presolve.hpp"
#include "ccp/projection.hpp"
#include "ccp/result.hpp"
#include "ccp/types.hpp"

namespace ccp {

struct SolverConfig {
  double time_limit_sec = kInf;
};

struct BBNode {
  IndexSet ones;
  IndexSet zeros;
  double bound = 0.0;
};

namespace solver_detail {

enum class PropOutcome { consistent, infeasible };

/// Unit propagation to fixpoint over the mass constraint and both cut
/// families. Forcing a hull-induction target to one and a nearly saturated
/// vertex set's last member to zero are the only inference shapes.
inline PropOutcome propagate(const ScenarioSet& sc, double threshold,
                             const std::vector<ValidInequality>& cuts, IndexSet& ones,
                             IndexSet& zeros) {
  bool changed = true;
  while (changed) {
    changed = false;
    double avail = sc.total_mass() - sc.mass(zeros);
    if (avail < threshold - kMassSlack) return PropOutcome::infeasible;
    for (const ValidInequality& vi : cuts) {
      int undecided = -1, n_ones = 0, n_und = 0;
      for (int v : vi.vertex_set) {
        if (set_contains(ones, v)) {
          ++n_ones;
        } else if (!set_contains(zeros, v)) {
          ++n_und;
          undecided = v;
        }
      }
      const int total = static_cast<int>(vi.vertex_set.size());
      if (vi.kind == ValidInequality::Kind::hull_induction) {
        if (n_ones == total) {
          if (set_contains(zeros, vi.target)) return PropOutcome::infeasible;
          if (!set_contains(ones, vi.target)) {
            ones = set_insert(std::move(ones), vi.target);
            changed = true;
          }
        } else if (set_contains(zeros, vi.target) && n_und == 1 &&
                   n_ones == total - 1) {
          zeros = set_insert(std::move(zeros), undecided);
          changed = true;
        }
      } else {  // hull_cut: at most total-1 of the vertex set selected
        if (n_ones == total) return PropOutcome::infeasible;
        if (n_ones == total - 1 && n_und == 1) {
          zeros = set_insert(std::move(zeros), undecided);
          changed = true;
        }
      }
    }
  }
  return PropOutcome::consistent;
}

}  // namespace solver_detail

struct GreedyIncumbent {
  double value = kInf;
  Point point;
  IndexSet selection;
};

/// Warm-start incumbent: grow the safe set with selectable scenarios in
/// ascending anchor distance until the mass threshold holds, then evaluate
/// that selection's restriction. Absent when the non-pruned mass cannot
/// reach the threshold (the fixed problem is infeasible) or the selection's
/// region is not certified feasible.
inline std::optional<GreedyIncumbent> greedy_incumbent(const PBPInstance& inst,
                                                       const PartitionState& partition) {
  const int n = inst.scenarios.size();
  std::vector<int> order;
  for (int s = 0; s < n; ++s)
    if (partition.selectable(s)) order.push_back(s);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    double da = distance(inst.scenarios.xi[static_cast<size_t>(a)], inst.x_bar, Norm::L2);
    double db = distance(inst.scenarios.xi[static_cast<size_t>(b)], inst.x_bar, Norm::L2);
    if (da != db) return da < db;
    return a < b;
  });

  IndexSet sel = partition.safe;
  double mass = inst.scenarios.mass(sel);
  const double threshold = inst.chance_threshold();
  size_t next = 0;
  while (mass < threshold - kMassSlack) {
    if (next >= order.size()) return std::nullopt;
    int s = order[next++];
    sel = set_insert(std::move(sel), s);
    mass += inst.scenarios.pi[static_cast<size_t>(s)];
  }

  ProjectionResult pr = project(inst, sel);
  if (pr.status != ProjStatus::feasible) return std::nullopt;
  GreedyIncumbent out;
  out.value = pr.value;
  out.point = pr.point;
  out.selection = std::move(sel);
  return out;
}

/// Exact solve. A presolve report contributes fixings, cuts, and bound
/// seeds; passing nullptr searches from scratch. Deterministic: best-first
/// on bound with FIFO tie-breaks, branching on the heaviest selectable
/// scenario (ties: closest to the anchor, then lowest index).
inline SolveResult solve(const PBPInstance& inst, const PresolveReport* report = nullptr,
                         const SolverConfig& config = {}) {
  using clock = std::chrono::steady_clock;
  const auto t_start = clock::now();
  const auto deadline =
      std::isfinite(config.time_limit_sec)
          ? t_start + std::chrono::duration_cast<clock::duration>(
                          std::chrono::duration<double>(config.time_limit_sec))
          : clock::time_point::max();

  const ScenarioSet& sc = inst.scenarios;
  const int n = sc.size();
  const double threshold = inst.chance_threshold();
  const IndexSet fixed_safe = report ? report->partition.safe : IndexSet{};
  const IndexSet fixed_pruned = report ? report->partition.pruned : IndexSet{};
  const std::vector<ValidInequality> cuts =
      report ? report->inequalities : std::vector<ValidInequality>{};

  SolveResult res;
  res.nodes_explored = 0;

  // Incumbent: value + selection; minimizer recomputed at finalization so
  // the reported triple is internally consistent.
  double inc_value = kInf;
  IndexSet inc_selection;
  std::optional<Point> inc_point;
  auto offer_incumbent = [&](double value, const IndexSet& selection, const Point& x) {
    if (value < inc_value) {
      inc_value = value;
      inc_selection = selection;
      inc_point = x;
    }
  };

  {
    PartitionState seed;
    seed.safe = fixed_safe;
    seed.pruned = fixed_pruned;
    if (auto greedy = greedy_incumbent(inst, seed))
      offer_incumbent(greedy->value, greedy->selection, greedy->point);
  }
  if (report && report->bounds.incumbent && std::isfinite(report->bounds.upper)) {
    // Selection backing the report's incumbent: the scenarios its point
    // satisfies, shrunk to threshold mass.
    ChanceEvaluation ev = chance_check(inst, *report->bounds.incumbent);
    if (ev.feasible) {
      IndexSet sel = reduce_to_minimal(sc, inst.tau, ev.satisfied, fixed_safe);
      offer_incumbent(report->bounds.upper, sel, *report->bounds.incumbent);
    }
  }
  double root_lower = report ? report->bounds.lower : -kInf;

  struct QueueEntry {
    double bound;
    long seq;
    IndexSet ones, zeros;
    bool operator<(const QueueEntry& o) const {
      if (bound != o.bound) return bound > o.bound;  // min-heap on bound
      return seq > o.seq;                            // FIFO among equals
    }
  };
  std::priority_queue<QueueEntry> open;
  long seq_counter = 0;

  std::vector<double> dist(static_cast<size_t>(n));
  for (int s = 0; s < n; ++s)
    dist[static_cast<size_t>(s)] = distance(sc.xi[static_cast<size_t>(s)], inst.x_bar, Norm::L2);

  // Evaluates a candidate node: propagate, bound, leaf-check. Returns false
  // if the node dies (infeasible or pruned).
  auto push_node = [&](IndexSet ones, IndexSet zeros, double parent_bound) {
    if (solver_detail::propagate(sc, threshold, cuts, ones, zeros) ==
        solver_detail::PropOutcome::infeasible)
      return;
    double bound = parent_bound;
    ProjectionResult pr =
        ones.empty() ? ProjectionResult{inst.x_bar, 0.0, ProjStatus::feasible, false}
                     : project(inst, ones);
    if (pr.status == ProjStatus::feasible && pr.value_exact) {
      bound = std::max(parent_bound, pr.value);
    } else if (pr.status == ProjStatus::empty && pr.empty_certified) {
      return;  // no completion can satisfy these constraints
    }
    // Inexact value, stall, or iteration cap: keep the parent bound. An
    // iterative value can overshoot the true restriction value, and a bound
    // used for pruning must never do that.
    if (bound > inc_value - kValueSlack) return;

    if (sc.mass(ones) >= threshold - kMassSlack) {
      // Leaf. Reduce to a minimal selection (never dropping fixed-safe
      // scenarios), then evaluate it for the incumbent.
      IndexSet reduced = reduce_to_minimal(sc, inst.tau, ones, fixed_safe);
      ProjectionResult leaf =
          reduced == ones && pr.status == ProjStatus::feasible ? pr : project(inst, reduced);
      if (leaf.status == ProjStatus::feasible) {
        offer_incumbent(leaf.value, reduced, leaf.point);
      } else if (!(leaf.status == ProjStatus::empty && leaf.empty_certified)) {
        throw std::runtime_error("solve: projection failed to certify at a leaf");
      }
      return;
    }
    open.push(QueueEntry{bound, seq_counter++, std::move(ones), std::move(zeros)});
  };

  push_node(fixed_safe, fixed_pruned, std::max(root_lower, 0.0));

  bool timed_out = false;
  while (!open.empty()) {
    if (clock::now() > deadline) {
      timed_out = true;
      break;
    }
    QueueEntry node = open.top();
    open.pop();
    ++res.nodes_explored;
    if (node.bound > inc_value - kValueSlack) continue;

    // Branch on the heaviest selectable scenario.
    int pick = -1;
    for (int s = 0; s < n; ++s) {
      if (set_contains(node.ones, s) || set_contains(node.zeros, s)) continue;
      if (pick < 0) {
        pick = s;
        continue;
      }
      double ps = sc.pi[static_cast<size_t>(s)], pp = sc.pi[static_cast<size_t>(pick)];
      if (ps > pp ||
          (ps == pp && dist[static_cast<size_t>(s)] < dist[static_cast<size_t>(pick)]))
        pick = s;
    }
    if (pick < 0) continue;  // fully decided yet below threshold: dead end

    push_node(set_insert(node.ones, pick), node.zeros, node.bound);
    push_node(node.ones, set_insert(node.zeros, pick), node.bound);
  }

  // Finalize: recompute the incumbent's projection so value, minimizer and
  // selection agree exactly.
  if (inc_value < kInf) {
    ProjectionResult pr = project(inst, inc_selection);
    if (pr.status == ProjStatus::feasible) {
      res.value = pr.value;
      res.minimizer = pr.point;
      res.selection = inc_selection;
    } else {
      res.value = inc_value;
      res.minimizer = inc_point;
      res.selection = inc_selection;
    }
    res.upper = res.value;
  }

  if (timed_out) {
    res.status = SolveStatus::time_limit;
    double open_min = kInf;
    // Drain remaining bounds; the smallest open bound is the proof floor.
    while (!open.empty()) {
      open_min = std::min(open_min, open.top().bound);
      open.pop();
    }
    res.lower = std::min(std::max(root_lower, open_min), res.upper);
  } else if (inc_value < kInf) {
    res.status = SolveStatus::optimal;
    res.lower = res.upper;
  } else {
    res.status = SolveStatus::infeasible;
    res.value = res.lower = res.upper = kInf;
  }
  res.wall_ms = std::chrono::duration<double, std::milli>(clock::now() - t_start).count();
  return res;
}

/// Independent recheck of an optimal result: chance feasibility of the
/// minimizer, per-constraint feasibility of the selection, box membership,
/// objective consistency, and the selection's restriction value.
inline bool verify(const PBPInstance& inst, const SolveResult& result) {
  if (result.status != SolveStatus::optimal) return false;
  if (!result.minimizer) return false;
  const Point& x = *result.minimizer;
  if (x.dim != inst.p) return false;
  for (int i = 0; i < x.dim; ++i)
    if (std::abs(x[i]) > inst.R_bar + kFeasTol) return false;

  ChanceEvaluation ev = chance_check(inst, x);
  if (!ev.feasible) return false;

  if (result.selection.empty()) return false;
  double mass = inst.scenarios.mass(result.selection);
  if (mass < inst.chance_threshold() - kMassSlack) return false;
  for (int s : result.selection) {
    double c = distance(x, inst.scenarios.xi[static_cast<size_t>(s)], inst.o_tilde) - inst.R;
    if (c > kFeasTol) return false;
  }

  double f = norm_of(x - inst.x_bar, inst.o);
  double tol = 1e-6 * std::max(1.0, std::abs(result.value));
  if (std::abs(f - result.value) > tol) return false;

  ProjectionResult pr = project(inst, result.selection);
  if (pr.status != ProjStatus::feasible) return false;
  return std::abs(pr.value - result.value) <= tol;
}

}  // namespace ccp
