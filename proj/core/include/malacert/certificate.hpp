/**
 * Copyright The malacert Authors.
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include "malacert/potential.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>

namespace malacert {

enum class Regime { A3, A4beta };
std::string to_string(Regime r);

struct Upsilons {
  double upsilon = 1.0;
  double upsilon_tilde = 1.0;
  double upsilon_beta = 1.0;
  double upsilon_hat = 1.0;
};

/// Geometric ergodicity certificate. Quantities that under- or overflow doubles
/// are carried as logarithms; `log_rho` is per block of ceil(1/gamma) steps.
struct Certificate {
  Regime regime = Regime::A3;
  double eta = 0;
  double log_Gamma_bar = 0;  // largest certified stepsize
  double Gamma_bar = 0;      // exp(log_Gamma_bar), floored at 1e-300
  double log_gamma_bar = 0;  // stepsize the constants below are evaluated at
  double gamma_bar = 0;
  double varpi = 0;
  double log_lambda = 0;
  double log_b = 0;
  double log_M = 0;
  double K_gamma_bar = 0;
  double log_epsilon = 0;
  double log_b_bar = 0;
  double log_neg_log_rho = 0;
  double log_rho = 0;  // -exp(log_neg_log_rho); may round to -0
  double log_C = 0;
  double log_A_bar = 0;       // at gamma_bar
  double log_A_bar_grid = 0;  // minimum over a log-spaced gamma_bar grid
  nlohmann::json provenance;

  /// log of the Lyapunov function for this regime.
  double log_lyapunov(const Vec& x) const;
};

Certificate certify(const AssumptionParams& p, int d, const Upsilons& u = {},
                    std::optional<double> gamma_bar = std::nullopt);

Certificate certify_beta(const BetaParams& p, double L, double M, int d, const Upsilons& u = {},
                         std::optional<double> gamma_bar = std::nullopt);

/// log of the bound on the V-norm distance to pi after k kernel steps at stepsize gamma.
/// Incomplete blocks are floored.
double bound_at(const Certificate& c, const Vec& x, long long k, double gamma);

/// Same bound after n complete blocks, usable when ceil(1/gamma) is not representable.
double bound_at_blocks(const Certificate& c, const Vec& x, double n_blocks);

nlohmann::json to_json(const Certificate& c);
Certificate certificate_from_json(const nlohmann::json& j);

}  // namespace malacert
