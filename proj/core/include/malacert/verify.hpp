/**
 * Copyright The malacert Authors.
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include "malacert/kernels.hpp"
#include "malacert/minorization.hpp"
#include "malacert/potential.hpp"
#include "malacert/report.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace malacert {

/// Deliberate corruptions used to show that each suite can fail.
struct Injection {
  bool drop_acceptance = false;     // reversibility: treat every proposal as accepted
  bool ula_for_invariance = false;  // invariance: run ULA instead of MALA
  double tail_c_scale = 1.0;        // tail: scale c inside the bound
  double envelope_log_C_shift = 0;  // envelope: add to log C
};

struct VerifyOptions {
  std::set<std::string> suites;  // empty runs every suite
  std::uint64_t seed = 20240601;
  double n_se = 5.0;
  double invariance_n_se = 4.0;

  long long n_probe = 4000;
  double probe_radius = 20.0;
  long long n_growth = 20000;
  long long n_tau = 100000;

  int n_moment_pairs = 20;
  long long n_moment_mc = 1000000;
  int n_exact_x = 200;
  int n_exact_gamma = 20;
  int n_drift_points = 30;
  long long n_drift_mc = 20000;

  long long n_tail = 1000000;

  MinorizationCheckOptions minorization;
  int moment_growth_k = 20;
  double moment_growth_gamma = 0.1;

  std::vector<double> reversibility_gammas{0.01, 0.1, 0.5};
  double reversibility_half_width = 6.0;
  int reversibility_grid = 400;
  double reversibility_tol = 1e-10;

  std::vector<double> invariance_gammas{0.1, 0.5};
  long long invariance_steps = 100000;

  long long envelope_chains = 10000;
  int envelope_blocks = 10;
  double envelope_x0 = 2.0;

  Injection inject;
};

/// Names of all suites in run order.
const std::vector<std::string>& all_suites();

/// Runs the selected suites for a potential under the strong-convexity-at-infinity assumption,
/// plus the beta suites when `beta` is given. Never throws for a failed inequality; errors
/// raised while building constants become failed checks.
VerificationReport verify_all(const PotentialSpec& spec, const AssumptionParams& params,
                              const VerifyOptions& o = {},
                              const std::optional<BetaParams>& beta = std::nullopt);

/// Beta-only variant (no strong convexity at infinity).
VerificationReport verify_all_beta(const PotentialSpec& spec, const BetaParams& beta, double L,
                                   std::optional<double> M, const VerifyOptions& o = {});

/// Max over a uniform grid of |pi(x) q(x,y) - pi(y) q(y,x)| with q the MALA transition density
/// off the diagonal. `metropolis = false` drops the acceptance step.
double verify_reversibility_1d(const PotentialSpec& spec, double gamma, double grid_half_width,
                               int n_grid, bool metropolis = true);

struct TestFunction {
  std::string name;
  std::function<double(const Vec&)> f;
  double pi_f;
};

/// Coordinate mean, second moment, clipped log V and clipped V with their stationary values.
/// Closed forms for the standard gaussian; quadrature for other 1-d potentials.
std::vector<TestFunction> default_test_functions(const PotentialSpec& spec, double eta);

struct RateEstimate {
  struct Series {
    std::string name;
    std::vector<double> gap;  // |E f(X_k) - pi(f)| per step
    std::vector<double> se;
    long long window_end = 0;  // first k where the gap falls below 2 se
    double slope = 0;          // per-step log-rate fit over [0, window_end)
    double slope_se = 0;
    bool insufficient_signal = false;
  };
  double gamma = 0;
  long long n_chains = 0;
  std::vector<Series> series;
};

RateEstimate estimate_rate(const PotentialSpec& spec, double gamma, const Vec& x0,
                           long long n_chains, long long horizon, std::uint64_t seed,
                           const std::vector<TestFunction>& fns);

/// Long-run mean and second-moment matrix of a single chain against known values,
/// with batch-means standard errors.
Check invariance_check(const PotentialSpec& spec, KernelKind kind, double gamma,
                       long long n_steps, const Vec& pi_mean, const Mat& pi_second_moment,
                       double n_se, std::uint64_t seed);

}  // namespace malacert
