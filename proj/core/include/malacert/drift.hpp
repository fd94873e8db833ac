/**
 * Copyright The malacert Authors.
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include "malacert/potential.hpp"
#include "malacert/report.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace malacert {

/// log V_eta(x) = eta |x|^2.
double log_V(double eta, const Vec& x);
/// log W_eta(x) = eta (1 + |x|^2)^{1/2}.
double log_W(double eta_beta, const Vec& x);

/// Exact log Q_gamma V_eta(x) = -(d/2) log(1 - 4 eta gamma) + eta |x - gamma grad U(x)|^2 / (1 - 4 eta gamma).
double ula_V_moment_exact(const PotentialSpec& spec, const Vec& x, double gamma, double eta);

/// sup_{u >= 1} u e^{-u/2^7} = 2^7 / e (maximiser u = 2^7).
double sup_u_exp_term();

struct QuadraticGrowth {
  double K_tilde;  // 2K(1 + L/m)
  double C_tilde;  // L K_tilde^2
};
QuadraticGrowth quadratic_growth_constants(const AssumptionParams& p);

struct BetaGrowth {
  double K_tilde_beta;
  double C_tilde_beta;
  double K_bar_beta;
};
BetaGrowth quadratic_growth_constants_beta(const BetaParams& p, double L);

struct ConvexityRadius {
  double m_prime;  // m / 2
  double radius;   // K + 8 K L / m
};
ConvexityRadius convexity_at_infinity_radius(const AssumptionParams& p);

/// Worst-case segment bound: min over t of (1 - t gamma L)|x| - t sqrt(2 gamma)|z| >= |x|/2.
/// Requires gamma <= 1/(4L) and |z| <= |x| / (4 sqrt(2 gamma)).
bool hessian_perturbation_check(double gamma, double norm_x, double norm_z, double L,
                                const std::vector<double>& t_grid);

struct UlaDrift {
  double eta_bar;
  double K_U;
  double log_b_U;
};
/// Requires 0 < gamma_bar <= m / (4 L^2).
UlaDrift ula_drift_constants(const AssumptionParams& p, int d, double gamma_bar);
/// log b^U as a function of gamma_bar (no range check; gamma_bar may underflow to 0).
double ula_log_b_U(const AssumptionParams& p, int d, double gamma_bar);

struct DriftConstants {
  double eta_bar = 0;
  double K_tilde = 0;
  double K_U = 0;
  double Gamma_half = 0;
  double C2_Gamma_half = 0;
  double b_half = 0;
  double K_half = 0;
  double K_M = 0;
  double Gamma = 0;
  double varpi = 0;
  double log_gamma_bar = 0;  // where the gamma_bar-dependent pieces are evaluated
  double log_b_U = 0;
  double log_b_M = 0;
};

/// Requires M. Evaluates b^U and b^M at gamma_bar (default Gamma); gamma_bar must be <= Gamma.
DriftConstants mala_drift_constants(const AssumptionParams& p, int d, double upsilon = 1.0,
                                    std::optional<double> gamma_bar = std::nullopt);

/// log b^M at log gamma_bar, for gamma_bar below double range.
double mala_log_b_M(const DriftConstants& dc, const AssumptionParams& p, int d, double log_gamma_bar);

struct UlaBetaDrift {
  double eta_beta;
  double K_ray_beta;
  double log_b_beta;
};
/// Requires 0 < gamma_bar <= m_beta / (2^5 L_beta^2).
UlaBetaDrift ula_beta_drift_constants(const BetaParams& p, double L, int d, double gamma_bar);
double ula_log_b_beta(const BetaParams& p, double L, int d, double gamma_bar);

struct BetaDriftConstants {
  double eta_beta = 0;
  double K_tilde_beta = 0;
  double K_bar_beta = 0;
  double K_beta_ray = 0;
  double Gamma_half_beta = 0;
  double C2_beta_Gamma_half = 0;
  double b_half_beta = 0;
  double K_half = 0;
  double K_tilde_ray = 0;
  double Gamma_beta = 0;
  double varpi_beta = 0;
  double log_gamma_bar = 0;
  double log_b_beta = 0;
  double log_b_M_beta = 0;
};

BetaDriftConstants mala_beta_drift_constants(const BetaParams& p, double L, double M, int d,
                                             double upsilon_beta = 1.0,
                                             std::optional<double> gamma_bar = std::nullopt);
double mala_beta_log_b(const BetaDriftConstants& dc, const BetaParams& p, double L, double M,
                       int d, double log_gamma_bar);

/// Lemma tail bound: log of exp(-c |x|^2 / (4 gamma)); requires |x| >= sqrt(8 gamma_bar d / c).
double chi2_tail_log_bound(double c, double gamma, double norm_x, int d, double gamma_bar);

struct McOptions {
  double n_se = 5.0;  // Monte Carlo allowance in standard errors
  double tail_c_scale = 1.0;  // multiplies c in the tail bound only; != 1 for failure injection
};

/// Monte Carlo check of log E[V(ULA step)] against the closed form.
VerificationReport ula_moment_mc_check(const PotentialSpec& spec, const std::vector<Vec>& xs,
                                       const std::vector<double>& gammas, double eta, long long n_mc,
                                       std::uint64_t seed, const McOptions& o = {});

/// Exact (closed-form) check of the ULA drift inequality on an (x, gamma) grid.
VerificationReport ula_drift_exact_check(const PotentialSpec& spec, const AssumptionParams& p,
                                         const std::vector<Vec>& xs,
                                         const std::vector<double>& gammas);

/// MALA drift inequality R V <= (1 - varpi gamma) V + b^M gamma 1{|x| <= K^M}, log-mean-exp MC.
VerificationReport mala_drift_check(const PotentialSpec& spec, const DriftConstants& dc,
                                    double gamma, const std::vector<Vec>& xs, long long n_mc,
                                    std::uint64_t seed, const McOptions& o = {});

/// ULA drift for W under the beta assumption, log-mean-exp MC.
VerificationReport ula_beta_drift_check(const PotentialSpec& spec, const BetaParams& p, double L,
                                        double gamma, const std::vector<Vec>& xs, long long n_mc,
                                        std::uint64_t seed, const McOptions& o = {});

/// MALA drift for W under the beta assumption, log-mean-exp MC.
VerificationReport mala_beta_drift_check(const PotentialSpec& spec, const BetaDriftConstants& dc,
                                         double gamma, const std::vector<Vec>& xs, long long n_mc,
                                         std::uint64_t seed, const McOptions& o = {});

/// Empirical P(|Z| >= sqrt(c/gamma)|x|) versus the tail bound.
VerificationReport chi2_tail_check(double c, double gamma, double norm_x, int d, double gamma_bar,
                                   long long n_mc, std::uint64_t seed, const McOptions& o = {});

/// Sampled checks of the appendix growth lemmas (monotonicity at infinity, quadratic growth,
/// segment norm) on a potential.
VerificationReport growth_lemma_checks(const PotentialSpec& spec, const AssumptionParams& p,
                                       long long n, double radius, std::uint64_t seed);

/// Sampled checks of the beta growth lemmas (drift lower bound and gradient upper bound).
VerificationReport beta_growth_lemma_checks(const PotentialSpec& spec, const BetaParams& p,
                                            double L, long long n, double radius,
                                            std::uint64_t seed);

}  // namespace malacert
