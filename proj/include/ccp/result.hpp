#pragma once

// Solve outcome shared by the exact search and the enumeration oracle.

#include <optional>
#include <string>

#include <json.hpp>

#include "ccp/types.hpp"

namespace ccp {

enum class SolveStatus { optimal, infeasible, time_limit };

inline std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::time_limit: return "time_limit";
  }
  return "unknown";
}

struct SolveResult {
  SolveStatus status = SolveStatus::infeasible;
  double value = kInf;             // F*_tau, or best upper bound at timeout
  std::optional<Point> minimizer;  // x*
  IndexSet selection;              // selected scenario indices (0-based)
  double lower = -kInf;
  double upper = kInf;
  long nodes_explored = 0;
  double wall_ms = 0.0;
};

/// External JSON form; indices 1-based, non-finite numbers rendered as null.
inline nlohmann::json result_to_json(const SolveResult& r) {
  nlohmann::json j;
  auto num = [](double v) {
    return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json();
  };
  j["status"] = to_string(r.status);
  j["value"] = num(r.value);
  if (r.minimizer) {
    nlohmann::json x = nlohmann::json::array();
    for (int i = 0; i < r.minimizer->dim; ++i) x.push_back((*r.minimizer)[i]);
    j["x"] = x;
  } else {
    j["x"] = nlohmann::json();
  }
  nlohmann::json sel = nlohmann::json::array();
  for (int s : r.selection) sel.push_back(s + 1);
  j["selection"] = sel;
  j["lower"] = num(r.lower);
  j["upper"] = num(r.upper);
  j["nodes"] = r.nodes_explored;
  j["wall_ms"] = static_cast<long>(r.wall_ms);
  return j;
}

}  // namespace ccp
