/**
 * Copyright The malacert Authors.
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include "malacert/potential.hpp"
#include "malacert/report.hpp"

#include <cstdint>
#include <vector>

namespace malacert {

inline constexpr double kRadiusFloor = 1e-300;
inline constexpr double kLogReportThreshold = 1e-30;

/// exp(log_r) floored at kRadiusFloor.
double clamp_radius(double log_r);

struct MinorizationConstants {
  double K = 0;
  double epsilon_K = 0;
  double log_epsilon_K = 0;
  double b_tilde_U = 0;
  double Gamma_tilde_half = 0;
  double log_Gamma_tilde_K = 0;
  double Gamma_tilde_K = 0;
  double L_gamma_bar = 0;
  double Gamma_hat_half = 0;
  double log_Gamma_hat_K = 0;
  double Gamma_hat_K = 0;
};

/// Small-set constant 2 Phi(-sqrt(3(L+1)) K).
double epsilon_of_K(double K, double L);
double log_epsilon_of_K(double K, double L);

double tilde_b_ula(double gamma_bar, const AssumptionParams& p, int d);

/// TV(delta_x R, delta_x Q) bound, clipped at 2.
double tv_diff_one_step_bound(const Vec& x, double gamma, double gamma_bar,
                              const AssumptionParams& p);
/// TV between ceil(1/gamma)-step MALA and ULA laws, clipped at 2.
double tv_diff_horizon_bound(const Vec& x, double gamma, double gamma_bar,
                             const AssumptionParams& p);

double log_gamma_tilde_K(double K, const AssumptionParams& p, int d, double upsilon_tilde = 1.0);
double gamma_tilde_K(double K, const AssumptionParams& p, int d, double upsilon_tilde = 1.0);

double L_gamma_bar(double gamma_bar, double L);
/// Second-moment bound after k ULA steps under a gradient-Lipschitz potential only.
double moment_growth_bound(const Vec& x, long long k, double gamma, double gamma_bar, double L,
                           int d);

/// Stepsize radius for the beta regime; needs only L and M.
double log_gamma_hat_K(double K, double L, double M, int d, double upsilon_hat = 1.0);
double gamma_hat_K(double K, double L, double M, int d, double upsilon_hat = 1.0);

MinorizationConstants minorization_constants(double K, const AssumptionParams& p, int d,
                                             double upsilon_tilde = 1.0, double upsilon_hat = 1.0);

struct MinorizationCheckOptions {
  double n_se = 5.0;
  long long n_mc = 20000;
  int n_points = 50;
  double x_radius = 10.0;
  long long n_pairs = 10000;
  double coupling_gamma_floor = 1e-2;  // smallest stepsize the coupling check will simulate
};

/// E|Y_1|^2 <= (1 - m gamma/2)|x|^2 + gamma b~^U at random x, gamma <= m/(4L^2).
VerificationReport second_moment_drift_check(const PotentialSpec& spec, const AssumptionParams& p,
                                             std::uint64_t seed,
                                             const MinorizationCheckOptions& o = {});

/// k-step ULA second moment against moment_growth_bound for k <= k_max.
VerificationReport moment_growth_check(const PotentialSpec& spec, double L, const Vec& x,
                                       double gamma, int k_max, std::uint64_t seed,
                                       const MinorizationCheckOptions& o = {});

/// 2 E[1 - alpha] (the exact one-step TV between MALA and ULA) against the one-step bound.
VerificationReport tv_one_step_check(const PotentialSpec& spec, const AssumptionParams& p,
                                     std::uint64_t seed, const MinorizationCheckOptions& o = {});

/// Miscoupling fraction of block-length coupled MALA chains started at x and y.
VerificationReport small_set_coupling_check(const PotentialSpec& spec, const AssumptionParams& p,
                                            const Vec& x, const Vec& y, double K,
                                            std::uint64_t seed,
                                            const MinorizationCheckOptions& o = {});

}  // namespace malacert
