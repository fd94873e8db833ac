/**
 * Copyright The malacert Authors.
 * SPDX-License-Identifier: Apache-2.0
 */
#include "malacert/minorization.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace malacert {
namespace {

AssumptionParams unit_gaussian() {
  AssumptionParams p;
  p.L = 1;
  p.M = 0.0;
  p.m = 1;
  return p;
}

TEST(Minorization, EpsilonValues) {
  EXPECT_DOUBLE_EQ(epsilon_of_K(0.0, 1.0), 1.0);
  EXPECT_NEAR(epsilon_of_K(1.0, 1.0), 2.0 * 0.5 * std::erfc(std::sqrt(6.0) / std::sqrt(2.0)), 1e-16);
  EXPECT_NEAR(epsilon_of_K(1.0, 1.0), 1.4306e-2, 1e-6);
  EXPECT_NEAR(log_epsilon_of_K(1.0, 1.0), std::log(epsilon_of_K(1.0, 1.0)), 1e-14);
  // stays finite where epsilon underflows
  EXPECT_TRUE(std::isfinite(log_epsilon_of_K(1e3, 1.0)));
  EXPECT_EQ(epsilon_of_K(1e3, 1.0), 0.0);
}

TEST(Minorization, EpsilonDecreasesInK) {
  double prev = 1.0;
  for (double K : {0.5, 1.0, 2.0, 4.0}) {
    const double e = epsilon_of_K(K, 2.0);
    EXPECT_LT(e, prev);
    prev = e;
  }
}

TEST(Minorization, BTildeReference) { EXPECT_NEAR(tilde_b_ula(0.25, unit_gaussian(), 1), 24.0, 1e-12); }

TEST(Minorization, GammaTildeDecreasesInK) {
  const AssumptionParams p = unit_gaussian();
  double prev = 0;
  for (double K : {1.0, 2.0, 4.0, 8.0, 1e3}) {
    const double lg = log_gamma_tilde_K(K, p, 1);
    if (K > 1.0) EXPECT_LT(lg, prev);
    prev = lg;
  }
  EXPECT_NEAR(log_gamma_tilde_K(4.0, p, 1), -113.59650147914127, 1e-10);
  EXPECT_NEAR(gamma_tilde_K(4.0, p, 1), std::exp(log_gamma_tilde_K(4.0, p, 1)), 1e-60);
}

TEST(Minorization, GammaHatReference) {
  EXPECT_NEAR(log_gamma_hat_K(4.0, 1.0, 0.5, 2), -117.23055944249545, 1e-10);
}

TEST(Minorization, ClampRadius) {
  EXPECT_EQ(clamp_radius(-1e6), kRadiusFloor);
  EXPECT_DOUBLE_EQ(clamp_radius(0.0), 1.0);
}

TEST(Minorization, TvBoundsClipAtTwo) {
  const AssumptionParams p = unit_gaussian();
  const Vec x = Vec::Constant(1, 1e6);
  EXPECT_EQ(tv_diff_one_step_bound(x, 0.2, 0.25, p), 2.0);
  EXPECT_EQ(tv_diff_horizon_bound(x, 0.2, 0.25, p), 2.0);
  const Vec x0 = Vec::Zero(1);
  EXPECT_LT(tv_diff_one_step_bound(x0, 1e-4, 0.25, p), 1e-3);
}

TEST(Minorization, MomentGrowthMonotoneInK) {
  const Vec x = Vec::Constant(2, 1.0);
  double prev = 0;
  for (long long k = 0; k <= 10; ++k) {
    const double b = moment_growth_bound(x, k, 0.1, 0.1, 1.0, 2);
    EXPECT_GE(b, prev);
    prev = b;
  }
  EXPECT_DOUBLE_EQ(moment_growth_bound(x, 0, 0.1, 0.1, 1.0, 2), x.squaredNorm());
}

TEST(Minorization, ConstantsBundle) {
  const MinorizationConstants mc = minorization_constants(4.0, unit_gaussian(), 1);
  EXPECT_EQ(mc.K, 4.0);
  EXPECT_NEAR(mc.log_Gamma_tilde_K, log_gamma_tilde_K(4.0, unit_gaussian(), 1), 1e-14);
  EXPECT_NEAR(mc.log_epsilon_K, log_epsilon_of_K(4.0, 1.0), 1e-14);
}

TEST(Minorization, MonteCarloChecksPass) {
  const BuiltinPotential g = builtin("gaussian", 2);
  MinorizationCheckOptions o;
  o.n_mc = 5000;
  o.n_points = 10;
  o.n_pairs = 2000;
  EXPECT_TRUE(second_moment_drift_check(g.spec, *g.a3, 1, o).pass());
  EXPECT_TRUE(moment_growth_check(g.spec, 1.0, Vec::Constant(2, 3.0), 0.1, 10, 2, o).pass());
  EXPECT_TRUE(tv_one_step_check(g.spec, *g.a3, 3, o).pass());
  const VerificationReport c =
      small_set_coupling_check(g.spec, *g.a3, Vec::Constant(2, -1.0), Vec::Constant(2, 1.0), 2.0, 4, o);
  EXPECT_TRUE(c.pass()) << c.table();
}

}  // namespace
}  // namespace malacert
