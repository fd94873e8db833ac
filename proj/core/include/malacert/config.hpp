/**
 * Copyright The malacert Authors.
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include "malacert/certificate.hpp"
#include "malacert/kernels.hpp"
#include "malacert/potential.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace malacert {

struct BetaBlock {
  BetaParams params;
  double L = 0;
  std::optional<double> M;
};

struct OutputPaths {
  std::string dir = ".";
  std::string certificate = "certificate.json";
  std::string trajectory = "trajectory.csv";
  std::string summary = "summary.json";
  std::string report = "report.json";
};

struct VerifyBudget {
  std::vector<std::string> suites;
  std::optional<double> n_se;
  std::optional<long long> n_probe;
  std::optional<long long> n_tau;
  std::optional<long long> n_moment_mc;
  std::optional<long long> n_drift_mc;
  std::optional<long long> n_tail;
  std::optional<long long> invariance_steps;
  std::optional<long long> envelope_chains;
};

struct RunConfig {
  std::string potential_kind;
  int dim = 1;
  ParamMap potential_params;
  std::optional<AssumptionParams> assumptions;
  std::optional<BetaBlock> beta;
  KernelKind kernel = KernelKind::MALA;
  double gamma = 0;
  std::optional<double> gamma_bar;
  std::uint64_t seed = 0;
  long long n_steps = 1000;
  long long n_chains = 1;
  int thin = 1;
  std::vector<double> x0;  // empty means the origin
  Upsilons upsilons;
  OutputPaths output;
  VerifyBudget verify;
};

/// Throws ConfigError with the offending key on any schema violation.
RunConfig parse_config(const nlohmann::json& j);
nlohmann::json to_json(const RunConfig& c);
RunConfig load_config(const std::string& path);

/// Starting point as a vector of the configured dimension.
Vec start_point(const RunConfig& c);

}  // namespace malacert
