#pragma once

// Instance model for the probabilistic ball projection problem:
//   minimize ||x - x_bar||_o  over the box X = B_inf(0, R_bar)
//   subject to  P[ ||x - xi||_ot <= R ] >= 1 - tau
// with finite scenario support {(xi_s, pi_s)}. Indices are 0-based in
// memory and 1-based in every serialized report.

#include <json.hpp>

#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ccp/types.hpp"

namespace ccp {

/// Finite support: points xi_s with masses pi_s.
struct ScenarioSet {
  std::vector<Point> xi;
  std::vector<double> pi;

  int size() const { return static_cast<int>(xi.size()); }

  double total_mass() const {
    double m = 0.0;
    for (double q : pi) m += q;
    return m;
  }

  double mass(const IndexSet& s) const {
    double m = 0.0;
    for (int i : s) m += pi[static_cast<size_t>(i)];
    return m;
  }

  double min_mass() const {
    double m = kInf;
    for (double q : pi) m = std::min(m, q);
    return m;
  }

  bool equiprobable(double tol = kMassSlack) const {
    if (xi.empty()) return false;
    double ref = total_mass() / size();
    for (double q : pi)
      if (std::abs(q - ref) > tol) return false;
    return true;
  }
};

struct PBPInstance {
  int p = 2;             // ambient dimension, 2 or 3
  double tau = 0.1;      // violation budget
  Norm o = Norm::L2;     // objective norm
  Norm o_tilde = Norm::Linf;  // scenario ball norm, L1 or Linf
  double R = 1.0;        // scenario ball radius
  double R_bar = 1.0;    // box half-width
  Point x_bar;           // anchor point
  ScenarioSet scenarios;

  int size() const { return scenarios.size(); }

  /// Chance-feasibility threshold on satisfied mass. Equals 1 - tau for
  /// unit-mass instances; stays equivalent after normalize drops scenarios
  /// (masses are kept unscaled and tau absorbs the dropped violation mass).
  double chance_threshold() const { return scenarios.total_mass() - tau; }
};

/// Distance from q to the box B_inf(0, R_bar) in the given norm. Exact
/// interval geometry: coordinates project independently.
inline double box_distance(const Point& q, double R_bar, Norm n) {
  Point e(q.dim);
  for (int i = 0; i < q.dim; ++i) e[i] = std::max(std::abs(q[i]) - R_bar, 0.0);
  return norm_of(e, n);
}

/// True when X intersects the scenario ball B_ot(xi, R).
inline bool region_feasible(const PBPInstance& inst, const Point& xi) {
  return box_distance(xi, inst.R_bar, inst.o_tilde) <= inst.R;
}

/// Collects human-readable contract violations; empty means valid.
inline std::vector<std::string> validate(const PBPInstance& inst) {
  std::vector<std::string> v;
  auto flag = [&v](const std::string& m) { v.push_back(m); };

  if (inst.p != 2 && inst.p != 3) flag("p must be 2 or 3");
  if (!(inst.tau > 0.0) || !(inst.tau < 1.0)) flag("tau must lie in (0, 1)");
  if (!(inst.R > 0.0) || !std::isfinite(inst.R)) flag("R must be positive and finite");
  if (!(inst.R_bar > 0.0) || !std::isfinite(inst.R_bar))
    flag("R_bar must be positive and finite");
  if (inst.o_tilde != Norm::L1 && inst.o_tilde != Norm::Linf)
    flag("scenario ball norm must be L1 or Linf");
  if (inst.x_bar.dim != inst.p) flag("x_bar dimension differs from p");
  for (int i = 0; i < inst.x_bar.dim; ++i)
    if (!std::isfinite(inst.x_bar[i])) flag("x_bar has a non-finite coordinate");

  const ScenarioSet& sc = inst.scenarios;
  if (sc.size() == 0) flag("at least one scenario is required");
  if (sc.xi.size() != sc.pi.size()) flag("scenario points and masses differ in count");
  for (int s = 0; s < sc.size(); ++s) {
    const Point& q = sc.xi[static_cast<size_t>(s)];
    if (q.dim != inst.p) {
      flag("scenario " + std::to_string(s + 1) + " dimension differs from p");
      continue;
    }
    for (int i = 0; i < q.dim; ++i)
      if (!std::isfinite(q[i]))
        flag("scenario " + std::to_string(s + 1) + " has a non-finite coordinate");
  }
  for (int s = 0; s < static_cast<int>(sc.pi.size()); ++s) {
    double q = sc.pi[static_cast<size_t>(s)];
    if (!(q >= 0.0) || !std::isfinite(q))
      flag("scenario " + std::to_string(s + 1) + " mass is negative or non-finite");
  }
  if (sc.size() > 0 && std::abs(sc.total_mass() - 1.0) > kMassSlack)
    flag("scenario masses must sum to 1 within 1e-9");
  return v;
}

struct NormalizeLog {
  std::vector<std::string> entries;
  IndexSet dropped_zero_mass;    // original 0-based indices
  IndexSet dropped_infeasible;   // original 0-based indices
};

/// Removes zero-mass scenarios (tau unchanged) and scenarios whose ball
/// misses the box entirely (tau reduced by the scenario mass, masses kept
/// unscaled). Throws std::invalid_argument when the reduced budget is
/// exhausted: such an instance is infeasible as stated.
inline PBPInstance normalize(const PBPInstance& inst, NormalizeLog* log = nullptr) {
  PBPInstance out = inst;
  out.scenarios.xi.clear();
  out.scenarios.pi.clear();
  double tau = inst.tau;
  NormalizeLog local;
  for (int s = 0; s < inst.size(); ++s) {
    const Point& q = inst.scenarios.xi[static_cast<size_t>(s)];
    double mass = inst.scenarios.pi[static_cast<size_t>(s)];
    if (mass <= 0.0) {
      local.dropped_zero_mass.push_back(s);
      local.entries.push_back("dropped zero-mass scenario " + std::to_string(s + 1));
      continue;
    }
    if (!region_feasible(inst, q)) {
      tau -= mass;
      local.dropped_infeasible.push_back(s);
      std::ostringstream msg;
      msg << "dropped scenario " << (s + 1)
          << " (ball misses the box), tau reduced to " << tau;
      local.entries.push_back(msg.str());
      continue;
    }
    out.scenarios.xi.push_back(q);
    out.scenarios.pi.push_back(mass);
  }
  if (tau <= 0.0)
    throw std::invalid_argument(
        "normalize: always-violated scenarios exhaust the violation budget");
  out.tau = tau;
  if (log) *log = std::move(local);
  return out;
}

struct ChanceEvaluation {
  IndexSet satisfied;
  double mass = 0.0;
  bool feasible = false;
};

/// Evaluates the chance constraint at x: which scenario balls contain x
/// (within 1e-9 on the ball inequality) and whether their mass reaches the
/// threshold (within 1e-9).
inline ChanceEvaluation chance_check(const PBPInstance& inst, const Point& x) {
  ChanceEvaluation ev;
  for (int s = 0; s < inst.size(); ++s) {
    double c = distance(x, inst.scenarios.xi[static_cast<size_t>(s)], inst.o_tilde) -
               inst.R;
    if (c <= kValueSlack) {
      ev.satisfied.push_back(s);
      ev.mass += inst.scenarios.pi[static_cast<size_t>(s)];
    }
  }
  ev.feasible = ev.mass >= inst.chance_threshold() - kMassSlack;
  return ev;
}

// ---- JSON serialization (strict: unknown fields are rejected) ----

namespace detail {

inline void require_keys(const nlohmann::json& j,
                         const std::vector<std::string>& keys,
                         const std::string& what) {
  for (const auto& k : keys)
    if (!j.contains(k))
      throw std::invalid_argument(what + ": missing field '" + k + "'");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find(keys.begin(), keys.end(), it.key()) == keys.end())
      throw std::invalid_argument(what + ": unknown field '" + it.key() + "'");
  }
}

inline Point point_from_json(const nlohmann::json& j, const std::string& what) {
  if (!j.is_array() || (j.size() != 2 && j.size() != 3))
    throw std::invalid_argument(what + ": expected an array of 2 or 3 numbers");
  Point q(static_cast<int>(j.size()));
  for (int i = 0; i < q.dim; ++i) q[i] = j[static_cast<size_t>(i)].get<double>();
  return q;
}

}  // namespace detail

inline nlohmann::json instance_to_json(const PBPInstance& inst) {
  nlohmann::json j;
  j["p"] = inst.p;
  j["tau"] = inst.tau;
  j["o"] = to_string(inst.o);
  j["o_tilde"] = to_string(inst.o_tilde);
  j["R"] = inst.R;
  j["R_bar"] = inst.R_bar;
  j["x_bar"] = std::vector<double>(inst.x_bar.c.begin(),
                                   inst.x_bar.c.begin() + inst.x_bar.dim);
  j["scenarios"] = nlohmann::json::array();
  for (int s = 0; s < inst.size(); ++s) {
    const Point& q = inst.scenarios.xi[static_cast<size_t>(s)];
    nlohmann::json js;
    js["xi"] = std::vector<double>(q.c.begin(), q.c.begin() + q.dim);
    js["pi"] = inst.scenarios.pi[static_cast<size_t>(s)];
    j["scenarios"].push_back(js);
  }
  return j;
}

inline PBPInstance instance_from_json(const nlohmann::json& j) {
  detail::require_keys(
      j, {"p", "tau", "o", "o_tilde", "R", "R_bar", "x_bar", "scenarios"},
      "instance");
  PBPInstance inst;
  inst.p = j["p"].get<int>();
  inst.tau = j["tau"].get<double>();
  inst.o = norm_from_string(j["o"].get<std::string>());
  inst.o_tilde = norm_from_string(j["o_tilde"].get<std::string>());
  inst.R = j["R"].get<double>();
  inst.R_bar = j["R_bar"].get<double>();
  inst.x_bar = detail::point_from_json(j["x_bar"], "x_bar");
  if (!j["scenarios"].is_array())
    throw std::invalid_argument("instance: scenarios must be an array");
  for (const auto& js : j["scenarios"]) {
    detail::require_keys(js, {"xi", "pi"}, "scenario");
    inst.scenarios.xi.push_back(detail::point_from_json(js["xi"], "scenario xi"));
    inst.scenarios.pi.push_back(js["pi"].get<double>());
  }
  return inst;
}

inline PBPInstance parse_instance(const std::string& text) {
  return instance_from_json(nlohmann::json::parse(text));
}

}  // namespace ccp
