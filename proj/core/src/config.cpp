/**
 * Copyright The malacert Authors.
 * SPDX-License-Identifier: Apache-2.0
 */
#include "malacert/config.hpp"

#include "malacert/errors.hpp"

#include <fstream>

namespace malacert {

namespace {

using nlohmann::json;

const json& need(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw ConfigError("missing key '" + where + key + "'");
  return j.at(key);
}

template <class T>
T get(const json& j, const char* key, const std::string& where) {
  try {
    return need(j, key, where).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError("bad value for '" + where + key + "': " + e.what());
  }
}

template <class T>
std::optional<T> opt(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return get<T>(j, key, where);
}

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || it.key() == a;
    if (!ok) throw ConfigError("unknown key '" + where + it.key() + "'");
  }
}

template <class T>
void put_opt(json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

}  // namespace

RunConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  check_keys(j, {"potential", "assumptions", "beta", "kernel", "gamma", "gamma_bar", "seed", "n_steps",
                 "n_chains", "thin", "x0", "upsilons", "output", "verify"}, "");
  RunConfig c;
  const json& pot = need(j, "potential", "");
  check_keys(pot, {"kind", "dim", "params"}, "potential.");
  c.potential_kind = get<std::string>(pot, "kind", "potential.");
  if (c.potential_kind == "declared")
    throw ConfigError("potential.kind 'declared' (external gradient tables) is not supported");
  c.dim = get<int>(pot, "dim", "potential.");
  if (c.dim < 1) throw ConfigError("potential.dim must be positive");
  if (pot.contains("params")) c.potential_params = get<ParamMap>(pot, "params", "potential.");

  const bool has_a = j.contains("assumptions"), has_b = j.contains("beta");
  if (has_a == has_b) throw ConfigError("exactly one of 'assumptions' and 'beta' must be present");
  if (has_a) {
    const json& a = j.at("assumptions");
    check_keys(a, {"L", "M", "m", "K"}, "assumptions.");
    AssumptionParams p;
    p.L = get<double>(a, "L", "assumptions.");
    p.M = opt<double>(a, "M", "assumptions.");
    p.m = get<double>(a, "m", "assumptions.");
    p.K = get<double>(a, "K", "assumptions.");
    c.assumptions = p;
  } else {
    const json& b = j.at("beta");
    check_keys(b, {"beta", "m_beta", "L_beta", "K_beta", "L", "M"}, "beta.");
    BetaBlock bb;
    bb.params.beta = get<double>(b, "beta", "beta.");
    bb.params.m_beta = get<double>(b, "m_beta", "beta.");
    bb.params.L_beta = get<double>(b, "L_beta", "beta.");
    bb.params.K_beta = get<double>(b, "K_beta", "beta.");
    bb.L = get<double>(b, "L", "beta.");
    bb.M = opt<double>(b, "M", "beta.");
    c.beta = bb;
  }

  if (j.contains("kernel")) {
    try {
      c.kernel = kernel_from_string(get<std::string>(j, "kernel", ""));
    } catch (const Error& e) {
      throw ConfigError(e.what());
    }
  }
  c.gamma = get<double>(j, "gamma", "");
  if (!(c.gamma > 0.0)) throw ConfigError("gamma must be positive");
  c.gamma_bar = opt<double>(j, "gamma_bar", "");
  c.seed = get<std::uint64_t>(j, "seed", "");
  c.n_steps = opt<long long>(j, "n_steps", "").value_or(c.n_steps);
  c.n_chains = opt<long long>(j, "n_chains", "").value_or(c.n_chains);
  c.thin = opt<int>(j, "thin", "").value_or(c.thin);
  if (c.n_steps < 1 || c.n_chains < 1 || c.thin < 1)
    throw ConfigError("n_steps, n_chains and thin must be positive");
  if (j.contains("x0")) {
    c.x0 = get<std::vector<double>>(j, "x0", "");
    if (static_cast<int>(c.x0.size()) != c.dim) throw ConfigError("x0 must have length potential.dim");
  }
  if (j.contains("upsilons")) {
    const json& u = j.at("upsilons");
    check_keys(u, {"upsilon", "upsilon_tilde", "upsilon_beta", "upsilon_hat"}, "upsilons.");
    c.upsilons.upsilon = opt<double>(u, "upsilon", "upsilons.").value_or(1.0);
    c.upsilons.upsilon_tilde = opt<double>(u, "upsilon_tilde", "upsilons.").value_or(1.0);
    c.upsilons.upsilon_beta = opt<double>(u, "upsilon_beta", "upsilons.").value_or(1.0);
    c.upsilons.upsilon_hat = opt<double>(u, "upsilon_hat", "upsilons.").value_or(1.0);
  }
  if (j.contains("output")) {
    const json& o = j.at("output");
    check_keys(o, {"dir", "certificate", "trajectory", "summary", "report"}, "output.");
    c.output.dir = opt<std::string>(o, "dir", "output.").value_or(c.output.dir);
    c.output.certificate = opt<std::string>(o, "certificate", "output.").value_or(c.output.certificate);
    c.output.trajectory = opt<std::string>(o, "trajectory", "output.").value_or(c.output.trajectory);
    c.output.summary = opt<std::string>(o, "summary", "output.").value_or(c.output.summary);
    c.output.report = opt<std::string>(o, "report", "output.").value_or(c.output.report);
  }
  if (j.contains("verify")) {
    const json& v = j.at("verify");
    check_keys(v, {"suites", "n_se", "n_probe", "n_tau", "n_moment_mc", "n_drift_mc", "n_tail",
                   "invariance_steps", "envelope_chains"}, "verify.");
    if (v.contains("suites")) c.verify.suites = get<std::vector<std::string>>(v, "suites", "verify.");
    c.verify.n_se = opt<double>(v, "n_se", "verify.");
    c.verify.n_probe = opt<long long>(v, "n_probe", "verify.");
    c.verify.n_tau = opt<long long>(v, "n_tau", "verify.");
    c.verify.n_moment_mc = opt<long long>(v, "n_moment_mc", "verify.");
    c.verify.n_drift_mc = opt<long long>(v, "n_drift_mc", "verify.");
    c.verify.n_tail = opt<long long>(v, "n_tail", "verify.");
    c.verify.invariance_steps = opt<long long>(v, "invariance_steps", "verify.");
    c.verify.envelope_chains = opt<long long>(v, "envelope_chains", "verify.");
  }
  return c;
}

json to_json(const RunConfig& c) {
  json j;
  j["potential"] = {{"kind", c.potential_kind}, {"dim", c.dim}};
  if (!c.potential_params.empty()) j["potential"]["params"] = c.potential_params;
  if (c.assumptions) {
    json a = {{"L", c.assumptions->L}, {"m", c.assumptions->m}, {"K", c.assumptions->K}};
    put_opt(a, "M", c.assumptions->M);
    j["assumptions"] = a;
  }
  if (c.beta) {
    json b = {{"beta", c.beta->params.beta}, {"m_beta", c.beta->params.m_beta},
              {"L_beta", c.beta->params.L_beta}, {"K_beta", c.beta->params.K_beta}, {"L", c.beta->L}};
    put_opt(b, "M", c.beta->M);
    j["beta"] = b;
  }
  j["kernel"] = to_string(c.kernel);
  j["gamma"] = c.gamma;
  put_opt(j, "gamma_bar", c.gamma_bar);
  j["seed"] = c.seed;
  j["n_steps"] = c.n_steps;
  j["n_chains"] = c.n_chains;
  j["thin"] = c.thin;
  if (!c.x0.empty()) j["x0"] = c.x0;
  j["upsilons"] = {{"upsilon", c.upsilons.upsilon}, {"upsilon_tilde", c.upsilons.upsilon_tilde},
                   {"upsilon_beta", c.upsilons.upsilon_beta}, {"upsilon_hat", c.upsilons.upsilon_hat}};
  j["output"] = {{"dir", c.output.dir}, {"certificate", c.output.certificate},
                 {"trajectory", c.output.trajectory}, {"summary", c.output.summary},
                 {"report", c.output.report}};
  json v = json::object();
  if (!c.verify.suites.empty()) v["suites"] = c.verify.suites;
  put_opt(v, "n_se", c.verify.n_se);
  put_opt(v, "n_probe", c.verify.n_probe);
  put_opt(v, "n_tau", c.verify.n_tau);
  put_opt(v, "n_moment_mc", c.verify.n_moment_mc);
  put_opt(v, "n_drift_mc", c.verify.n_drift_mc);
  put_opt(v, "n_tail", c.verify.n_tail);
  put_opt(v, "invariance_steps", c.verify.invariance_steps);
  put_opt(v, "envelope_chains", c.verify.envelope_chains);
  if (!v.empty()) j["verify"] = v;
  return j;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config is not valid JSON: " + std::string(e.what()));
  }
  return parse_config(j);
}

Vec start_point(const RunConfig& c) {
  if (c.x0.empty()) return Vec::Zero(c.dim);
  return Eigen::Map<const Vec>(c.x0.data(), static_cast<Eigen::Index>(c.x0.size()));
}

}  // namespace malacert
