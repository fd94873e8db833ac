/**
 * Copyright The malacert Authors.
 * SPDX-License-Identifier: Apache-2.0
 */
#include "malacert/errors.hpp"
#include "malacert/kernels.hpp"
#include "malacert/ratio.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace malacert {
namespace {

TEST(Ratio, DecompositionRecombinesToTauOnGaussian) {
  const BuiltinPotential p = builtin("gaussian", 4);
  NoiseStream rng(5, 0);
  for (int i = 0; i < 100; ++i) {
    const Vec x = 2.0 * rng.normal_vector(4);
    const Vec z = rng.normal_vector(4);
    const double gamma = std::pow(10.0, -3.0 + 3.0 * rng.uniform());
    const TauTerms t = tau_decomposed(p.spec, x, z, gamma);
    EXPECT_NEAR(t.recombine(), tau_direct(p.spec, x, z, gamma), 1e-10);
    EXPECT_NEAR(t.value, t.recombine(), 1e-15 * (1 + std::abs(t.value)));
  }
}

TEST(Ratio, AdaptiveDecompositionOnNonQuadratic) {
  NoiseStream rng(6, 0);
  for (const char* kind : {"bump", "gauss_bump", "beta_tail"}) {
    const BuiltinPotential p = builtin(kind, 2);
    for (int i = 0; i < 40; ++i) {
      const Vec x = 3.0 * rng.normal_vector(2);
      const Vec z = rng.normal_vector(2);
      const double gamma = std::pow(10.0, -2.0 + 2.0 * rng.uniform());
      const TauTerms t = tau_decomposed_adaptive(p.spec, x, z, gamma);
      const double direct = tau_direct(p.spec, x, z, gamma);
      EXPECT_NEAR(t.recombine(), direct, 1e-9 * (1 + std::abs(direct)) + tau_roundoff(p.spec, x, z, gamma))
          << kind;
    }
  }
}

TEST(Ratio, ConstantsAtReferencePoints) {
  EXPECT_DOUBLE_EQ(c1_bound(1.0, 1.0, 0.0), 4.0);
  EXPECT_NEAR(c2_bound(0.25, 1.0, 1.0), 39.25, 1e-12);
  EXPECT_DOUBLE_EQ(c2_gamma_max(1.0, 1.0), 0.25);
  EXPECT_DOUBLE_EQ(c2_beta_gamma_max(1.0, 1.0, 1.0), 1.0 / 16.0);
}

TEST(Ratio, C1IsMonotoneInGammaBar) {
  double prev = 0;
  for (double gb : {0.0, 1e-3, 0.1, 1.0, 10.0, 100.0}) {
    const double c = c1_bound(gb, 2.0, 0.5);
    EXPECT_GE(c, prev);
    prev = c;
  }
}

TEST(Ratio, C2RejectsOutsideAdmissibleRange) {
  EXPECT_THROW(c2_bound(0.0, 1.0, 1.0), DomainError);
  EXPECT_THROW(c2_bound(0.26, 1.0, 1.0), DomainError);
  EXPECT_THROW(c1_bound(-1.0, 1.0, 1.0), DomainError);
}

TEST(Ratio, BoundsHoldOnBuiltins) {
  for (const char* kind : {"gaussian", "bump", "gauss_bump"}) {
    const BuiltinPotential p = builtin(kind, 2);
    const double gb = c2_gamma_max(p.a3->L, p.a3->m);
    const VerificationReport r = check_tau_bounds(p.spec, *p.a3, gb, 20000, 9);
    EXPECT_TRUE(r.pass()) << kind << "\n" << r.table();
  }
}

TEST(Ratio, C1CheckSkippedWithoutM) {
  const BuiltinPotential p = builtin("gaussian", 2);
  AssumptionParams a = *p.a3;
  a.M.reset();
  const VerificationReport r = check_tau_bounds(p.spec, a, 0.1, 100, 1);
  bool skipped = false;
  for (const Check& c : r.checks) skipped |= c.status == Status::Skipped;
  EXPECT_TRUE(skipped);
}

TEST(Ratio, TauBoundFailsWhenLUnderstated) {
  const BuiltinPotential p = builtin("gauss_bump", 2);
  AssumptionParams bad = *p.a3;
  bad.L *= 0.05;
  bad.m = std::min(bad.m, bad.L);
  bad.M = *bad.M * 0.05;
  const VerificationReport r = check_tau_bounds(p.spec, bad, c2_gamma_max(bad.L, bad.m), 20000, 2);
  EXPECT_FALSE(r.pass()) << r.table();
}

}  // namespace
}  // namespace malacert
