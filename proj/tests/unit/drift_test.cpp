/**
 * Copyright The malacert Authors.
 * SPDX-License-Identifier: Apache-2.0
 */
#include "malacert/drift.hpp"
#include "malacert/errors.hpp"
#include "malacert/ratio.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

namespace malacert {
namespace {

AssumptionParams unit_gaussian() {
  AssumptionParams p;
  p.L = 1;
  p.M = 0.0;
  p.m = 1;
  p.K = 0;
  return p;
}

TEST(Drift, LyapunovLogs) {
  const Vec x = (Vec(2) << 3.0, 4.0).finished();
  EXPECT_DOUBLE_EQ(log_V(0.5, x), 12.5);
  EXPECT_DOUBLE_EQ(log_W(2.0, x), 2.0 * std::sqrt(26.0));
}

TEST(Drift, SupTerm) {
  EXPECT_DOUBLE_EQ(sup_u_exp_term(), 128.0 / std::numbers::e);
  for (double u : {1.0, 64.0, 128.0, 200.0, 1000.0}) EXPECT_LE(u * std::exp(-u / 128.0), sup_u_exp_term() * (1 + 1e-15));
}

TEST(Drift, UlaMomentClosedFormOnGaussian) {
  const BuiltinPotential g = builtin("gaussian", 2);
  const Vec x = (Vec(2) << 1.0, -2.0).finished();
  const double gamma = 0.1, eta = 0.5;
  const double s = 1 - 4 * eta * gamma;
  const double want = -std::log(s) + eta * (1 - gamma) * (1 - gamma) * 5.0 / s;
  EXPECT_NEAR(ula_V_moment_exact(g.spec, x, gamma, eta), want, 1e-14);
  EXPECT_THROW(ula_V_moment_exact(g.spec, x, 0.5, 0.5), DomainError);
}

TEST(Drift, GaussianMalaConstants) {
  const DriftConstants dc = mala_drift_constants(unit_gaussian(), 1);
  EXPECT_DOUBLE_EQ(dc.eta_bar, 0.0625);
  EXPECT_DOUBLE_EQ(dc.Gamma_half, 0.25);
  EXPECT_NEAR(dc.C2_Gamma_half, 39.25, 1e-12);
  EXPECT_NEAR(dc.b_half, 39.25 + 128.0 / std::numbers::e, 1e-12);
  EXPECT_NEAR(dc.K_M, 148.66967925002672, 1e-9);
  EXPECT_NEAR(dc.Gamma, 0.0028955773118595042, 1e-15);
  EXPECT_NEAR(dc.varpi, dc.b_half, 1e-12);
}

TEST(Drift, VarpiFromRadius) {
  for (double m : {0.2, 0.4, 0.6, 0.8, 1.0}) {
    AssumptionParams p = unit_gaussian();
    p.m = m;
    const DriftConstants dc = mala_drift_constants(p, 1);
    EXPECT_NEAR(dc.varpi, dc.eta_bar * m * dc.K_M * dc.K_M / 16.0, 1e-12 * dc.varpi);
    EXPECT_DOUBLE_EQ(dc.eta_bar, m / 16.0);
  }
}

TEST(Drift, UlaDriftRange) {
  const AssumptionParams p = unit_gaussian();
  EXPECT_NO_THROW(ula_drift_constants(p, 1, 0.25));
  EXPECT_THROW(ula_drift_constants(p, 1, 0.26), DomainError);
  EXPECT_DOUBLE_EQ(ula_drift_constants(p, 3, 0.1).log_b_U, ula_log_b_U(p, 3, 0.1));
}

TEST(Drift, MalaLogBMatchesAtGamma) {
  const AssumptionParams p = unit_gaussian();
  const DriftConstants dc = mala_drift_constants(p, 1);
  EXPECT_NEAR(mala_log_b_M(dc, p, 1, std::log(dc.Gamma)), dc.log_b_M, 1e-12 * std::abs(dc.log_b_M));
  // finite for gamma_bar far below double range
  EXPECT_TRUE(std::isfinite(mala_log_b_M(dc, p, 1, -1e5)));
}

TEST(Drift, GrowthConstants) {
  AssumptionParams p = unit_gaussian();
  p.K = 2;
  p.L = 3;
  p.m = 0.5;
  const QuadraticGrowth q = quadratic_growth_constants(p);
  EXPECT_DOUBLE_EQ(q.K_tilde, 2 * 2 * (1 + 3 / 0.5));
  EXPECT_DOUBLE_EQ(q.C_tilde, 3 * q.K_tilde * q.K_tilde);
  const ConvexityRadius c = convexity_at_infinity_radius(p);
  EXPECT_DOUBLE_EQ(c.m_prime, 0.25);
  EXPECT_DOUBLE_EQ(c.radius, 2 + 8 * 2 * 3 / 0.5);
}

TEST(Drift, HessianPerturbationSegment) {
  std::vector<double> t;
  for (int i = 0; i <= 100; ++i) t.push_back(i / 100.0);
  const double L = 2, gamma = 1 / (4 * L), nx = 3;
  EXPECT_TRUE(hessian_perturbation_check(gamma, nx, nx / (4 * std::sqrt(2 * gamma)), L, t));
  EXPECT_TRUE(hessian_perturbation_check(gamma / 10, nx, 0.0, L, t));
  EXPECT_THROW(hessian_perturbation_check(gamma, nx, 2 * nx / std::sqrt(2 * gamma), L, t), DomainError);
}

TEST(Drift, Chi2TailBoundRequiresRadius) {
  EXPECT_THROW(chi2_tail_log_bound(1.0 / 32, 0.1, 0.1, 2, 0.1), DomainError);
  EXPECT_DOUBLE_EQ(chi2_tail_log_bound(1.0 / 32, 0.1, 10.0, 2, 0.1), -(1.0 / 32) * 100.0 / 0.4);
}

TEST(Drift, MonteCarloChecksPassOnGaussian) {
  const BuiltinPotential g = builtin("gaussian", 2);
  const AssumptionParams p = *g.a3;
  std::vector<Vec> xs;
  for (double r : {0.0, 1.0, 5.0, 20.0}) xs.push_back(Vec::Constant(2, r));
  EXPECT_TRUE(ula_moment_mc_check(g.spec, xs, {0.01, 0.1, 0.01, 0.1}, 0.0625, 40000, 1).pass());
  EXPECT_TRUE(ula_drift_exact_check(g.spec, p, xs, {1e-3, 0.1, 0.25}).pass());
  const DriftConstants dc = mala_drift_constants(p, 2);
  EXPECT_TRUE(mala_drift_check(g.spec, dc, dc.Gamma, xs, 20000, 2).pass());
}

TEST(Drift, ExactCheckFailsAboveRange) {
  const BuiltinPotential g = builtin("gaussian", 1);
  const VerificationReport r = ula_drift_exact_check(g.spec, *g.a3, {Vec::Constant(1, 1.0)}, {0.5});
  EXPECT_FALSE(r.pass());
}

TEST(Drift, TailCheckPassesAndInjectionFails) {
  const double c = 1.0 / 32, gamma = 0.25;
  const double r = std::sqrt(8 * gamma * 2 / c);
  EXPECT_TRUE(chi2_tail_check(c, gamma, r, 2, gamma, 200000, 3).pass());
  McOptions o;
  o.tail_c_scale = 4;
  EXPECT_FALSE(chi2_tail_check(c, gamma, r, 2, gamma, 200000, 3, o).pass());
}

TEST(Drift, GrowthLemmasOnBuiltins) {
  for (const char* kind : {"gaussian", "bump", "gauss_bump"}) {
    const BuiltinPotential b = builtin(kind, 2);
    const VerificationReport r = growth_lemma_checks(b.spec, *b.a3, 5000, 30.0, 4);
    EXPECT_TRUE(r.pass()) << kind << "\n" << r.table();
  }
  const BuiltinPotential bt = builtin("beta_tail", 2);
  EXPECT_TRUE(beta_growth_lemma_checks(bt.spec, *bt.beta, bt.L, 5000, 1e3, 5).pass());
}

TEST(Drift, BetaConstantsAreFinite) {
  BetaParams b;
  b.beta = 0.5;
  b.m_beta = 0.495;
  b.L_beta = 1.7;
  const BetaDriftConstants dc = mala_beta_drift_constants(b, 1.0, 0.5, 2);
  EXPECT_NEAR(dc.Gamma_beta, 1.4013879685557523e-05, 1e-18);
  EXPECT_NEAR(dc.varpi_beta, 17839.45671073842, 1e-8);
  EXPECT_THROW(ula_beta_drift_constants(b, 1.0, 2, 1.0), DomainError);
}

}  // namespace
}  // namespace malacert
