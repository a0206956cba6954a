// Command-line front end: instance generation, single solves, and the
// benchmark runner. Exit codes: 0 success, 2 infeasible, 3 hit the time
// limit without a proven optimum, 1 usage or I/O errors.

#include <CLI11.hpp>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "ccp/bench.hpp"
#include "ccp/instance.hpp"
#include "ccp/minimal_subsets.hpp"
#include "ccp/presolve.hpp"
#include "ccp/result.hpp"
#include "ccp/solver.hpp"

namespace {

ccp::Norm parse_otilde(const std::string& s) {
  if (s == "l1" || s == "L1" || s == "1") return ccp::Norm::L1;
  if (s == "linf" || s == "Linf" || s == "inf") return ccp::Norm::Linf;
  throw CLI::ValidationError("--otilde", "expected l1 or linf");
}

int exit_code_for(const ccp::SolveResult& res) {
  switch (res.status) {
    case ccp::SolveStatus::optimal: return 0;
    case ccp::SolveStatus::infeasible: return 2;
    case ccp::SolveStatus::time_limit: return 3;
  }
  return 1;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Chance-constrained ball-projection toolkit"};
  app.require_subcommand(1);

  // --- gen ---
  auto* gen = app.add_subcommand("gen", "Generate a seeded instance as JSON");
  int gen_p = 2, gen_n = 10;
  double gen_tau = 0.15;
  std::uint64_t gen_seed = 1;
  bool gen_random_mass = false;
  std::string gen_otilde = "l1", gen_out;
  gen->add_option("--p", gen_p, "Ambient dimension (2 or 3)")->check(CLI::IsMember({2, 3}));
  gen->add_option("--n", gen_n, "Number of scenarios")->check(CLI::PositiveNumber);
  gen->add_option("--tau", gen_tau, "Violation budget in (0,1)");
  gen->add_option("--seed", gen_seed, "Generator seed");
  gen->add_flag("--random-mass", gen_random_mass, "Dirichlet-uniform scenario masses");
  gen->add_option("--otilde", gen_otilde, "Scenario ball norm: l1 or linf");
  gen->add_option("--out", gen_out, "Output instance file")->required();

  // --- solve ---
  auto* solve_cmd = app.add_subcommand("solve", "Solve an instance file");
  std::string solve_in, solve_mode = "presolve", solve_out, solve_report_out;
  double solve_time_limit = 500.0;
  solve_cmd->add_option("--in", solve_in, "Instance JSON file")->required();
  solve_cmd->add_option("--mode", solve_mode, "presolve | direct | brute")
      ->check(CLI::IsMember({"presolve", "direct", "brute"}));
  solve_cmd->add_option("--time-limit", solve_time_limit, "Seconds before giving up")
      ->check(CLI::PositiveNumber);
  solve_cmd->add_option("--out", solve_out, "Result JSON file (stdout otherwise)");
  solve_cmd->add_option("--report-out", solve_report_out,
                        "Presolve report JSON file (presolve mode)");

  // --- bench ---
  auto* bench = app.add_subcommand("bench", "Seeded multi-trial benchmark");
  int bench_p = 2, bench_n = 10, bench_trials = 5;
  double bench_tau = 0.15, bench_time_limit = 500.0;
  std::uint64_t bench_seed = 1;
  bool bench_random_mass = false;
  std::string bench_otilde = "l1", bench_out;
  std::vector<std::string> bench_modes{"presolve", "direct"};
  bench->add_option("--p", bench_p, "Ambient dimension (2 or 3)")->check(CLI::IsMember({2, 3}));
  bench->add_option("--n", bench_n, "Number of scenarios")->check(CLI::PositiveNumber);
  bench->add_option("--tau", bench_tau, "Violation budget in (0,1)");
  bench->add_option("--trials", bench_trials, "Trials per mode")->check(CLI::PositiveNumber);
  bench->add_option("--seed", bench_seed, "Base seed; trial t uses seed+t");
  bench->add_option("--time-limit", bench_time_limit, "Per-trial budget in seconds")
      ->check(CLI::PositiveNumber);
  bench->add_flag("--random-mass", bench_random_mass, "Dirichlet-uniform scenario masses");
  bench->add_option("--otilde", bench_otilde, "Scenario ball norm: l1 or linf");
  bench->add_option("--modes", bench_modes, "Comma-separated modes to compare")
      ->delimiter(',');
  bench->add_option("--out", bench_out, "CSV report file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      if (!(gen_tau > 0.0 && gen_tau < 1.0))
        throw std::runtime_error("--tau must lie in (0,1)");
      ccp::PBPInstance inst = ccp::generate_instance(
          gen_p, gen_n, gen_tau, gen_seed, gen_random_mass, parse_otilde(gen_otilde));
      write_text(gen_out, ccp::instance_to_json(inst).dump(2) + "\n");
      return 0;
    }

    if (*solve_cmd) {
      std::ifstream in(solve_in);
      if (!in) throw std::runtime_error("cannot open instance file: " + solve_in);
      nlohmann::json j;
      in >> j;
      ccp::PBPInstance inst = ccp::instance_from_json(j);
      std::vector<std::string> problems = ccp::validate(inst);
      if (!problems.empty()) {
        for (const std::string& p : problems) std::cerr << "invalid instance: " << p << "\n";
        return 1;
      }
      inst = ccp::normalize(inst);

      ccp::SolveResult res;
      if (solve_mode == "brute") {
        res = ccp::brute_force_solve(inst);
      } else if (solve_mode == "direct") {
        ccp::SolverConfig sconf;
        sconf.time_limit_sec = solve_time_limit;
        res = ccp::solve(inst, nullptr, sconf);
      } else {
        const auto t0 = std::chrono::steady_clock::now();
        ccp::PresolveReport report = ccp::run_pipeline(inst);
        double presolve_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (!solve_report_out.empty())
          write_text(solve_report_out, ccp::report_to_json(report).dump(2) + "\n");
        ccp::SolverConfig sconf;
        sconf.time_limit_sec = std::max(solve_time_limit - presolve_s, 0.0);
        res = ccp::solve(inst, &report, sconf);
        res.wall_ms += presolve_s * 1000.0;
      }

      std::string text = ccp::result_to_json(res).dump(2) + "\n";
      if (solve_out.empty())
        std::cout << text;
      else
        write_text(solve_out, text);
      return exit_code_for(res);
    }

    if (*bench) {
      std::vector<ccp::BenchRecord> records;
      for (const std::string& mode : bench_modes) {
        ccp::BenchConfig cfg;
        cfg.p = bench_p;
        cfg.N = bench_n;
        cfg.tau = bench_tau;
        cfg.mode = ccp::bench_mode_from_string(mode);
        cfg.seed = bench_seed;
        cfg.time_limit = bench_time_limit;
        cfg.trials = bench_trials;
        cfg.random_mass = bench_random_mass;
        cfg.o_tilde = parse_otilde(bench_otilde);
        records.push_back(ccp::run(cfg));
      }
      std::cout << ccp::render_table(records);
      if (!bench_out.empty()) write_text(bench_out, ccp::render_csv(records));
      for (const ccp::BenchRecord& rec : records)
        for (const ccp::BenchTrial& tr : rec.trials)
          if (tr.failed)
            std::cerr << "trial " << tr.trial << " (" << ccp::to_string(rec.config.mode)
                      << ") failed: " << tr.error << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
