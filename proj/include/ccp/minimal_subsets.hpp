#pragma once

// Minimal subsets: selections whose mass meets the chance threshold but
// drops below it when the lightest member leaves. The optimum of the chance
// constrained program is the minimum of the convex restriction over this
// family, which is what the enumeration oracle below computes.

#include <algorithm>
#include <chrono>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "ccp/instance.hpp"
#include "ccp/projection.hpp"
#include "ccp/result.hpp"
#include "ccp/types.hpp"

namespace ccp {

struct MinimalSubsetFamily {
  std::vector<IndexSet> subsets;
  bool exhausted = false;
};

/// Both defining inequalities, with the shared mass slack so that borderline
/// sums (exact rationals summed in binary) land on the intended side.
inline bool is_minimal(const ScenarioSet& scenarios, double tau, const IndexSet& S) {
  if (S.empty()) return false;
  const double cut = scenarios.total_mass() - tau - kMassSlack;
  double mass = 0.0, lightest = kInf;
  for (int s : S) {
    mass += scenarios.pi[static_cast<size_t>(s)];
    lightest = std::min(lightest, scenarios.pi[static_cast<size_t>(s)]);
  }
  return mass >= cut && mass - lightest < cut;
}

namespace ms_detail {

/// Required cardinality for equal masses pi each and threshold total - tau.
/// The guard inside ceil absorbs binary rounding of products like N*(1-tau).
inline int equiprobable_size(int n, double pi_each, double threshold) {
  int k = static_cast<int>(std::ceil(threshold / pi_each - 1e-9));
  return std::min(n, std::max(1, k));
}

/// Depth-first enumeration of every minimal subset, deterministic order:
/// indices by descending mass (ties by index), include-first. Two sound
/// prunes keep it sharp: a branch that cannot reach the threshold dies, and
/// a branch that reached it never extends (no proper superset of a
/// threshold-mass set is minimal: removing the lightest member of the
/// superset leaves a superset of the original or costs at most one extra
/// member's mass, either way staying at or above the threshold).
/// visit(S, mass) returns false to stop early.
template <class Visit>
inline void for_each_minimal(const ScenarioSet& scenarios, double tau, Visit&& visit) {
  const int n = scenarios.size();
  const double cut = scenarios.total_mass() - tau - kMassSlack;
  std::vector<int> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    double pa = scenarios.pi[static_cast<size_t>(a)];
    double pb = scenarios.pi[static_cast<size_t>(b)];
    if (pa != pb) return pa > pb;
    return a < b;
  });
  std::vector<double> suffix(static_cast<size_t>(n) + 1, 0.0);
  for (int i = n - 1; i >= 0; --i)
    suffix[static_cast<size_t>(i)] =
        suffix[static_cast<size_t>(i) + 1] + scenarios.pi[static_cast<size_t>(order[static_cast<size_t>(i)])];

  IndexSet chosen;
  chosen.reserve(static_cast<size_t>(n));
  bool stop = false;
  auto rec = [&](auto&& self, int idx, double mass, double lightest) -> void {
    if (stop) return;
    if (mass >= cut) {
      if (mass - lightest < cut) {
        IndexSet S = chosen;
        std::sort(S.begin(), S.end());
        if (!visit(static_cast<const IndexSet&>(S), mass)) stop = true;
      }
      return;
    }
    if (idx == n || mass + suffix[static_cast<size_t>(idx)] < cut) return;
    int s = order[static_cast<size_t>(idx)];
    chosen.push_back(s);
    self(self, idx + 1, mass + scenarios.pi[static_cast<size_t>(s)],
         std::min(lightest, scenarios.pi[static_cast<size_t>(s)]));
    chosen.pop_back();
    if (!stop) self(self, idx + 1, mass, lightest);
  };
  rec(rec, 0, 0.0, kInf);
}

}  // namespace ms_detail

/// All subsets of the equal-mass family: exactly the size-ceil(N(1-tau))
/// subsets of [N], emitted in lexicographic order.
inline MinimalSubsetFamily enumerate_equiprobable(int N, double tau) {
  if (N > 25) throw std::invalid_argument("enumerate_equiprobable: N > 25 unsupported");
  if (N < 1 || !(tau > 0.0 && tau < 1.0))
    throw std::invalid_argument("enumerate_equiprobable: need N >= 1 and tau in (0,1)");
  const int k = ms_detail::equiprobable_size(N, 1.0 / N, 1.0 - tau);
  MinimalSubsetFamily fam;
  IndexSet comb(static_cast<size_t>(k));
  std::iota(comb.begin(), comb.end(), 0);
  while (true) {
    fam.subsets.push_back(comb);
    int i = k - 1;
    while (i >= 0 && comb[static_cast<size_t>(i)] == N - k + i) --i;
    if (i < 0) break;
    ++comb[static_cast<size_t>(i)];
    for (int j = i + 1; j < k; ++j)
      comb[static_cast<size_t>(j)] = comb[static_cast<size_t>(j) - 1] + 1;
  }
  fam.exhausted = true;
  return fam;
}

/// Next unseen minimal subset in the deterministic search order, or nullopt
/// once the family is exhausted.
inline std::optional<IndexSet> next_minimal_subset(const ScenarioSet& scenarios, double tau,
                                                   const MinimalSubsetFamily& seen) {
  std::set<IndexSet> taken;
  for (const IndexSet& S : seen.subsets) taken.insert(set_normalized(S));
  std::optional<IndexSet> found;
  ms_detail::for_each_minimal(scenarios, tau, [&](const IndexSet& S, double) {
    if (taken.count(S)) return true;
    found = S;
    return false;
  });
  return found;
}

/// Shrinks a threshold-mass selection to a minimal one by repeatedly
/// dropping its lightest removable member (ties by lowest index) while the
/// mass stays at the threshold. Members of keep are never dropped.
inline IndexSet reduce_to_minimal(const ScenarioSet& scenarios, double tau, IndexSet S,
                                  const IndexSet& keep = {}) {
  const double cut = scenarios.total_mass() - tau - kMassSlack;
  S = set_normalized(S);
  double mass = 0.0;
  for (int s : S) mass += scenarios.pi[static_cast<size_t>(s)];
  while (true) {
    int drop = -1;
    double drop_pi = kInf;
    for (int s : S) {
      if (set_contains(keep, s)) continue;
      double pi = scenarios.pi[static_cast<size_t>(s)];
      if (pi < drop_pi) {
        drop_pi = pi;
        drop = s;
      }
    }
    if (drop < 0 || mass - drop_pi < cut) return S;
    S = set_erase(std::move(S), drop);
    mass -= drop_pi;
  }
}

/// Ground-truth optimum by evaluating the convex restriction on every
/// minimal subset. Desk scale only; the family explodes combinatorially.
inline SolveResult brute_force_solve(const PBPInstance& inst) {
  const int n = inst.scenarios.size();
  if (n > 25) throw std::invalid_argument("brute_force_solve: N > 25 unsupported");
  const auto t0 = std::chrono::steady_clock::now();

  SolveResult res;
  res.status = SolveStatus::infeasible;
  res.value = res.lower = res.upper = kInf;

  auto eval = [&](const IndexSet& S) {
    ++res.nodes_explored;
    ProjectionResult pr = project(inst, S);
    if (pr.status == ProjStatus::max_iter)
      throw std::runtime_error("brute_force_solve: projection iteration limit hit");
    if (pr.status == ProjStatus::empty) {
      if (!pr.empty_certified)
        throw std::runtime_error("brute_force_solve: projection stalled without emptiness certificate");
      return;
    }
    if (pr.value < res.value) {
      res.value = pr.value;
      res.minimizer = pr.point;
      res.selection = S;
    }
  };

  const bool unit_equal = inst.scenarios.equiprobable() &&
                          std::abs(inst.scenarios.total_mass() - 1.0) <= kMassSlack;
  if (unit_equal) {
    // Stream the fixed-cardinality family without materializing it.
    const int k = ms_detail::equiprobable_size(n, 1.0 / n, 1.0 - inst.tau);
    IndexSet comb(static_cast<size_t>(k));
    std::iota(comb.begin(), comb.end(), 0);
    while (true) {
      eval(comb);
      int i = k - 1;
      while (i >= 0 && comb[static_cast<size_t>(i)] == n - k + i) --i;
      if (i < 0) break;
      ++comb[static_cast<size_t>(i)];
      for (int j = i + 1; j < k; ++j)
        comb[static_cast<size_t>(j)] = comb[static_cast<size_t>(j) - 1] + 1;
    }
  } else {
    ms_detail::for_each_minimal(inst.scenarios, inst.tau, [&](const IndexSet& S, double) {
      eval(S);
      return true;
    });
  }

  if (res.value < kInf) {
    res.status = SolveStatus::optimal;
    res.lower = res.upper = res.value;
  }
  res.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

}  // namespace ccp
