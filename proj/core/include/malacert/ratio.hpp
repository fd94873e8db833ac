/**
 * Copyright The malacert Authors.
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include "malacert/potential.hpp"
#include "malacert/report.hpp"

#include <cstdint>

namespace malacert {

/// Coefficients of tau = sum_{k=2}^{6} gamma^{k/2} A_k along x_t = x + t(-gamma grad U(x) + sqrt(2 gamma) z).
struct TauTerms {
  double a2 = 0, a3 = 0, a4 = 0, a5 = 0, a6 = 0;
  int quadrature_order = 0;
  double gamma = 0;
  double value = 0;

  double recombine() const;
};

/// Gauss-Legendre evaluation of the A_k with one Hessian per node shared by all terms.
TauTerms tau_decomposed(const PotentialSpec& spec, const Vec& x, const Vec& z, double gamma,
                        int order = 16);

/// Doubles the order until two consecutive values agree to `tol`; returns the finer one.
TauTerms tau_decomposed_adaptive(const PotentialSpec& spec, const Vec& x, const Vec& z,
                                 double gamma, int order = 16, double tol = 1e-10,
                                 int max_order = 1024);

/// C_1 = 2 max(sqrt2 M, sqrt(gb) M L, 2 L^2 max(1, sqrt(gb), gb L, (gb L^{4/3})^{3/2})).
double c1_bound(double gamma_bar, double L, double M);

/// Largest gamma_bar for which c2_bound is stated: m^3 / (4 L^4).
double c2_gamma_max(double L, double m);
double c2_bound(double gamma_bar, double L, double m);

/// Largest gamma_bar for c2_beta_bound: min(1/(4L), m_beta^3 / (16 L_beta^4)).
double c2_beta_gamma_max(double L, double L_beta, double m_beta);
double c2_beta_bound(double gamma_bar, double L, double L_beta, double m_beta);

struct TauCheckOptions {
  double x_radius = 20.0;    // sampled |x| range upper end
  double gamma_decades = 6;  // gamma log-uniform in [gamma_bar 10^{-decades}, gamma_bar]
};

/// Monte Carlo check of |tau| <= C1 gamma^{3/2}(|z|^2 + |z|^4 + |x|^2) (skipped without M)
/// and of tau <= C2 gamma |z|^2 on its admissible region (gamma_bar clipped to m^3/(4L^4)).
VerificationReport check_tau_bounds(const PotentialSpec& spec, const AssumptionParams& params,
                                    double gamma_bar, long long n, std::uint64_t seed,
                                    const TauCheckOptions& opts = {});

/// Floating-point error bound for tau_direct at (x, z, gamma).
double tau_roundoff(const PotentialSpec& spec, const Vec& x, const Vec& z, double gamma);

}  // namespace malacert
