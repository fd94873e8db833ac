/**
 * Copyright The malacert Authors.
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include "malacert/report.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>

namespace malacert {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/**
 * A twice differentiable potential U = -log pi (up to a constant).
 *
 * Callbacks must be pure and re-entrant. When no Hessian is supplied a
 * central difference of the gradient is used.
 */
struct PotentialSpec {
  std::string name;
  int dim = 0;
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> gradient;
  std::function<Mat(const Vec&)> hessian;  // optional

  /// Validates dimension, callbacks, and grad U(0) = 0 (to 1e-10).
  static PotentialSpec make(std::string name, int dim, std::function<double(const Vec&)> value,
                            std::function<Vec(const Vec&)> gradient,
                            std::function<Mat(const Vec&)> hessian = {});

  bool has_analytic_hessian() const { return static_cast<bool>(hessian); }
  /// Analytic Hessian if present, otherwise the finite-difference one.
  Mat hess(const Vec& x) const;
};

/// Central-difference Hessian from the gradient, step cbrt(eps)(1 + |x|), symmetrised.
Mat finite_difference_hessian(const PotentialSpec& spec, const Vec& x);

struct Evaluation {
  double U;
  Vec grad;
  Mat hess;
};

/// U, grad U and the Hessian at x; throws NonFiniteError on NaN or infinity.
Evaluation evaluate(const PotentialSpec& spec, const Vec& x);

/// Constants of the regularity, third-derivative and curvature-at-infinity assumptions.
struct AssumptionParams {
  double L = 1.0;
  std::optional<double> M;  // third-derivative bound
  double m = 1.0;
  double K = 0.0;
  bool empirical = false;

  void validate() const;
  /// Throws AssumptionError unless M is present.
  double require_M() const;
};

/// Constants of the sub-quadratic curvature assumption with exponent beta.
struct BetaParams {
  double beta = 0.0;
  double m_beta = 1.0;
  double L_beta = 1.0;
  double K_beta = 0.0;
  bool empirical = false;

  void validate() const;
};

using ParamMap = std::map<std::string, double>;

struct BuiltinPotential {
  PotentialSpec spec;
  std::optional<AssumptionParams> a3;
  std::optional<BetaParams> beta;
  double L = 1.0;           // global Hessian bound
  std::optional<double> M;  // third-derivative bound
};

/**
 * Benchmark potentials:
 *  - gaussian:             |x|^2 / 2
 *  - anisotropic_gaussian: sum_i lambda_i x_i^2 / 2, lambda log-spaced in [lo, hi]
 *  - bump:                 |x|^2 / 2 + a sum_i cos(w x_i), requires a w^2 < 1
 *  - gauss_bump:           |x|^2 / 2 + a exp(-|x|^2 / (2 s^2)), non-convex core for a > s^2
 *  - beta_tail:            (1 + |x|^2)^{(2 - beta)/2} / (2 - beta)
 */
BuiltinPotential builtin(const std::string& kind, int d, const ParamMap& params = {});

/// Randomised check of the curvature and Hessian-norm bounds on the shell K < |x| <= radius.
VerificationReport probe_assumptions(const PotentialSpec& spec, const AssumptionParams& params,
                                     long long n, double radius, std::uint64_t seed);

/// As above for the beta assumption: m_beta / (1 + |x|^beta) <= D2U{y,y} <= L_beta / (1 + |x|^{3beta/4})
/// on K_beta < |x| <= radius, and |D2U| <= L.
VerificationReport probe_assumptions(const PotentialSpec& spec, const BetaParams& params, double L,
                                     long long n, double radius, std::uint64_t seed);

/// Deterministic radial scan estimating (m_beta, L_beta) for an isotropic potential with
/// K_beta = 0, shrinking/inflating by `safety` (results are flagged empirical).
BetaParams estimate_beta_params(const PotentialSpec& spec, double beta, double r_max,
                                double safety = 0.01);

/// Finite-difference estimate of sup |D^3 U| over |x| <= r_max (random directions).
double estimate_third_derivative_bound(const PotentialSpec& spec, double r_max, long long n,
                                       std::uint64_t seed);

/// Smallest radius K such that the probed minimum curvature is >= m on |x| >= K,
/// found by bisection on the sign change of the radial-scan curvature.
double curvature_radius_bisection(const PotentialSpec& spec, double m, double r_max);

}  // namespace malacert
