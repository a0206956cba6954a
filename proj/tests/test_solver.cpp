#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "helpers.hpp"

using namespace ccp;

namespace {

PBPInstance three_scenario_example() {
  PBPInstance inst;
  inst.p = 2;
  inst.tau = 0.4;
  inst.o_tilde = Norm::Linf;
  inst.R = 1.0;
  inst.R_bar = 20.0;
  inst.x_bar = Point(0.0, 0.0);
  inst.scenarios.xi = {Point(0.0, 0.0), Point(0.5, 0.0), Point(10.0, 10.0)};
  inst.scenarios.pi = {1.0 / 3, 1.0 / 3, 1.0 / 3};
  return inst;
}

PBPInstance weighted_square_center() {
  PBPInstance inst;
  inst.p = 2;
  inst.tau = 0.15;
  inst.o_tilde = Norm::Linf;
  inst.R = 1.0;
  inst.R_bar = 2.0;
  inst.x_bar = Point(0.0, 0.0);
  inst.scenarios.xi = {Point(1.0, 1.0), Point(-1.0, 1.0), Point(-1.0, -1.0),
                       Point(1.0, -1.0), Point(0.0, 0.0)};
  inst.scenarios.pi = {0.22, 0.22, 0.22, 0.22, 0.12};
  return inst;
}

void check_result_invariants(const PBPInstance& inst, const SolveResult& res) {
  if (res.status == SolveStatus::optimal) {
    CHECK(res.lower == res.upper);
    CHECK(res.value == res.upper);
    REQUIRE(res.minimizer.has_value());
    CHECK(inst.scenarios.mass(res.selection) >=
          inst.chance_threshold() - kMassSlack);
    CHECK(verify(inst, res));
  } else if (res.status == SolveStatus::infeasible) {
    CHECK(res.value == kInf);
    CHECK(res.selection.empty());
  } else {
    CHECK(res.lower <= res.upper);
  }
  CHECK(res.wall_ms >= 0.0);
}

}  // namespace

TEST_CASE("worked instances solve to known optima", "[solver]") {
  SECTION("two near scenarios suffice; the far one is ignored") {
    PBPInstance inst = three_scenario_example();
    SolveResult res = solve(inst);
    REQUIRE(res.status == SolveStatus::optimal);
    CHECK(res.value == Catch::Approx(0.0).margin(1e-9));
    CHECK(set_normalized(res.selection) == IndexSet{0, 1});
    check_result_invariants(inst, res);
  }
  SECTION("a presolved threshold-mass instance needs no search") {
    PBPInstance inst = weighted_square_center();
    PresolveReport rep = run_pipeline(inst);
    SolveResult res = solve(inst, &rep);
    REQUIRE(res.status == SolveStatus::optimal);
    CHECK(res.value == Catch::Approx(0.0).margin(1e-9));
    CHECK(res.nodes_explored <= 2);
    check_result_invariants(inst, res);
  }
  SECTION("a budget below the lightest mass reduces to the robust problem") {
    for (int t = 0; t < 6; ++t) {
      PBPInstance inst = generate_instance(2, 8, 0.2, ccptest::mix_seed(61, t), t % 2);
      inst.tau = 0.5 * inst.scenarios.min_mass();
      IndexSet all;
      for (int i = 0; i < inst.size(); ++i) all.push_back(i);
      ProjectionResult robust = project(inst, all);
      SolveResult res = solve(inst);
      CAPTURE(t);
      if (robust.status == ProjStatus::feasible) {
        REQUIRE(res.status == SolveStatus::optimal);
        CHECK(res.value == Catch::Approx(robust.value).margin(1e-9));
        CHECK(set_normalized(res.selection) == all);
      } else {
        CHECK(res.status == SolveStatus::infeasible);
      }
    }
  }
  SECTION("provably infeasible instances are reported as such") {
    PBPInstance inst;
    inst.p = 2;
    inst.tau = 0.3;
    inst.o_tilde = Norm::Linf;
    inst.R = 0.5;
    inst.R_bar = 10.0;
    inst.x_bar = Point(0.0, 0.0);
    inst.scenarios.xi = {Point(0.0, 0.0), Point(10.0, 0.0)};
    inst.scenarios.pi = {0.5, 0.5};
    SolveResult res = solve(inst);
    CHECK(res.status == SolveStatus::infeasible);
    check_result_invariants(inst, res);
  }
}

TEST_CASE("greedy warm start", "[solver]") {
  SECTION("grows the selection by anchor distance to threshold mass") {
    PBPInstance inst = three_scenario_example();
    auto g = greedy_incumbent(inst, {});
    REQUIRE(g.has_value());
    CHECK(set_normalized(g->selection) == IndexSet{0, 1});
    CHECK(g->value == Catch::Approx(0.0).margin(1e-9));
  }
  SECTION("a threshold-mass safe set is returned as-is") {
    PBPInstance inst = three_scenario_example();
    PartitionState part;
    part.safe = {0, 1};
    auto g = greedy_incumbent(inst, part);
    REQUIRE(g.has_value());
    CHECK(set_normalized(g->selection) == IndexSet{0, 1});
  }
  SECTION("insufficient selectable mass yields nothing") {
    PBPInstance inst = three_scenario_example();
    PartitionState part;
    part.pruned = {1, 2};
    CHECK_FALSE(greedy_incumbent(inst, part).has_value());
  }
  SECTION("an empty greedy region yields nothing") {
    PBPInstance inst;
    inst.p = 2;
    inst.tau = 0.45;
    inst.o_tilde = Norm::Linf;
    inst.R = 1.0;
    inst.R_bar = 20.0;
    inst.x_bar = Point(0.0, 0.0);
    inst.scenarios.xi = {Point(0.0, 0.0), Point(10.0, 0.0)};
    inst.scenarios.pi = {0.5, 0.5};
    CHECK_FALSE(greedy_incumbent(inst, {}).has_value());
  }
}

TEST_CASE("unit propagation over the cut families", "[solver]") {
  ScenarioSet sc;
  for (int i = 0; i < 5; ++i) {
    sc.xi.push_back(Point(static_cast<double>(i), 0.0));
    sc.pi.push_back(0.2);
  }
  const double threshold = 0.6;

  ValidInequality induction;
  induction.kind = ValidInequality::Kind::hull_induction;
  induction.target = 4;
  induction.vertex_set = {0, 1, 2, 3};
  induction.rhs = 3;

  ValidInequality cut;
  cut.kind = ValidInequality::Kind::hull_cut;
  cut.vertex_set = {0, 1, 2, 3};
  cut.rhs = 3;

  SECTION("a full vertex set forces its induction target on") {
    IndexSet ones = {0, 1, 2, 3}, zeros;
    auto out = solver_detail::propagate(sc, threshold, {induction}, ones, zeros);
    CHECK(out == solver_detail::PropOutcome::consistent);
    CHECK(set_contains(ones, 4));
  }
  SECTION("a full vertex set with the target off is contradictory") {
    IndexSet ones = {0, 1, 2, 3}, zeros = {4};
    CHECK(solver_detail::propagate(sc, threshold, {induction}, ones, zeros) ==
          solver_detail::PropOutcome::infeasible);
  }
  SECTION("an off target forces the last undecided vertex off") {
    IndexSet ones = {0, 1, 2}, zeros = {4};
    auto out = solver_detail::propagate(sc, threshold, {induction}, ones, zeros);
    CHECK(out == solver_detail::PropOutcome::consistent);
    CHECK(set_contains(zeros, 3));
  }
  SECTION("a saturated cardinality cut is contradictory") {
    IndexSet ones = {0, 1, 2, 3}, zeros;
    CHECK(solver_detail::propagate(sc, threshold, {cut}, ones, zeros) ==
          solver_detail::PropOutcome::infeasible);
  }
  SECTION("a nearly saturated cardinality cut forces the last vertex off") {
    IndexSet ones = {0, 1, 2}, zeros;
    auto out = solver_detail::propagate(sc, threshold, {cut}, ones, zeros);
    CHECK(out == solver_detail::PropOutcome::consistent);
    CHECK(set_contains(zeros, 3));
  }
  SECTION("shedding too much mass is contradictory") {
    IndexSet ones, zeros = {0, 1, 2};
    CHECK(solver_detail::propagate(sc, threshold, {}, ones, zeros) ==
          solver_detail::PropOutcome::infeasible);
  }
}

TEST_CASE("independent result verification catches tampering", "[solver]") {
  PBPInstance inst = three_scenario_example();
  SolveResult res = solve(inst);
  REQUIRE(res.status == SolveStatus::optimal);
  REQUIRE(verify(inst, res));

  SECTION("a displaced minimizer fails") {
    SolveResult bad = res;
    (*bad.minimizer)[0] += 0.37;
    CHECK_FALSE(verify(inst, bad));
  }
  SECTION("an out-of-box minimizer fails") {
    SolveResult bad = res;
    (*bad.minimizer)[0] = inst.R_bar + 1.0;
    CHECK_FALSE(verify(inst, bad));
  }
  SECTION("an emptied selection fails") {
    SolveResult bad = res;
    bad.selection.clear();
    CHECK_FALSE(verify(inst, bad));
  }
  SECTION("a selection without threshold mass fails") {
    SolveResult bad = res;
    bad.selection = {0};
    CHECK_FALSE(verify(inst, bad));
  }
  SECTION("a selection the minimizer does not satisfy fails") {
    SolveResult bad = res;
    bad.selection = {0, 2};
    CHECK_FALSE(verify(inst, bad));
  }
  SECTION("a falsified value fails") {
    SolveResult bad = res;
    bad.value += 0.25;
    CHECK_FALSE(verify(inst, bad));
  }
  SECTION("non-optimal statuses are not verifiable") {
    SolveResult bad = res;
    bad.status = SolveStatus::time_limit;
    CHECK_FALSE(verify(inst, bad));
  }
}

TEST_CASE("solver agrees with exhaustive enumeration", "[solver][oracle]") {
  for (int t = 0; t < 36; ++t) {
    const int p = (t % 3 == 2) ? 3 : 2;
    const int n = 6 + (t % 7);
    const double tau = 0.1 + 0.05 * (t % 6);
    PBPInstance inst = generate_instance(p, n, tau, ccptest::mix_seed(777, t),
                                         t % 2, (t % 4 < 2) ? Norm::L1 : Norm::Linf);
    CAPTURE(t, p, n, tau);

    SolveResult ref = brute_force_solve(inst);
    SolveResult direct = solve(inst);
    PresolveReport rep = run_pipeline(inst);
    SolveResult assisted = solve(inst, &rep);

    REQUIRE(direct.status == ref.status);
    REQUIRE(assisted.status == ref.status);
    if (ref.status == SolveStatus::optimal) {
      CHECK(ccptest::rel_diff(direct.value, ref.value) <= 1e-6);
      CHECK(ccptest::rel_diff(assisted.value, ref.value) <= 1e-6);
    }
    check_result_invariants(inst, direct);
    check_result_invariants(inst, assisted);
  }
}

TEST_CASE("interrupted solves still bracket the optimum", "[solver]") {
  int timeouts = 0;
  for (int t = 0; t < 3; ++t) {
    PBPInstance inst = generate_instance(2, 20, 0.15, ccptest::mix_seed(90210, t));
    inst.x_bar = Point(3.0, 3.0);  // push the anchor away so nothing is free
    SolveResult ref = brute_force_solve(inst);
    SolverConfig cfg;
    cfg.time_limit_sec = 0.003;
    SolveResult res = solve(inst, nullptr, cfg);
    CAPTURE(t, static_cast<int>(res.status));

    REQUIRE(ref.status == SolveStatus::optimal);
    CHECK(res.lower <= res.upper);
    CHECK(res.lower <= ref.value + 1e-9 * std::max(1.0, ref.value));
    if (std::isfinite(res.upper)) {
      CHECK(res.upper >= ref.value - 1e-9);
      // Any reported upper bound is backed by a real feasible selection.
      ProjectionResult pr = project(inst, res.selection);
      REQUIRE(pr.status == ProjStatus::feasible);
      CHECK(pr.value == Catch::Approx(res.value).margin(1e-9));
    }
    if (res.status == SolveStatus::time_limit) ++timeouts;
    if (res.status == SolveStatus::optimal)
      CHECK(ccptest::rel_diff(res.value, ref.value) <= 1e-6);
  }
  // The short limits must actually interrupt somewhere, or this test is vacuous.
  CHECK(timeouts >= 1);
}

TEST_CASE("solves are deterministic", "[solver]") {
  for (int t = 0; t < 4; ++t) {
    PBPInstance inst = generate_instance(2, 10, 0.2, ccptest::mix_seed(1212, t), t % 2);
    SolveResult a = solve(inst);
    SolveResult b = solve(inst);
    CHECK(a.status == b.status);
    CHECK(a.nodes_explored == b.nodes_explored);
    if (a.status == SolveStatus::optimal) {
      CHECK(a.value == b.value);
      CHECK(a.selection == b.selection);
    }
    PresolveReport rep = run_pipeline(inst);
    SolveResult c = solve(inst, &rep);
    SolveResult d = solve(inst, &rep);
    CHECK(c.nodes_explored == d.nodes_explored);
    if (c.status == SolveStatus::optimal) CHECK(c.value == d.value);
  }
}
