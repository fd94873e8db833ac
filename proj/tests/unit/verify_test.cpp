/**
 * Copyright The malacert Authors.
 * SPDX-License-Identifier: Apache-2.0
 */
#include "malacert/errors.hpp"
#include "malacert/parallel.hpp"
#include "malacert/verify.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace malacert {
namespace {

TEST(Verify, MalaIsReversibleAndUlaIsNot) {
  const BuiltinPotential g = builtin("gauss_bump", 1);
  for (double gamma : {0.01, 0.1, 0.5}) {
    EXPECT_LE(verify_reversibility_1d(g.spec, gamma, 6.0, 200), 1e-10) << gamma;
    EXPECT_GT(verify_reversibility_1d(g.spec, gamma, 6.0, 200, false), 1e-6) << gamma;
  }
}

TEST(Verify, SuiteNamesAreStable) {
  const std::vector<std::string> want = {"probe", "growth", "tau", "drift", "tail",
                                         "minorization", "reversibility", "invariance", "envelope"};
  EXPECT_EQ(all_suites(), want);
}

TEST(Verify, UnknownSuiteIsConfigError) {
  const BuiltinPotential g = builtin("gaussian", 1);
  VerifyOptions o;
  o.suites = {"nonsense"};
  EXPECT_THROW(verify_all(g.spec, *g.a3, o), ConfigError);
}

TEST(Verify, UnselectedSuitesAreSkipped) {
  const BuiltinPotential g = builtin("gaussian", 1);
  VerifyOptions o;
  o.suites = {"reversibility"};
  const VerificationReport r = verify_all(g.spec, *g.a3, o);
  EXPECT_TRUE(r.pass()) << r.table();
  bool ran = false;
  for (const Check& c : r.checks) {
    if (c.suite == "reversibility") {
      ran = true;
      EXPECT_EQ(c.status, Status::Pass);
    } else {
      EXPECT_EQ(c.status, Status::Skipped) << c.suite;
    }
  }
  EXPECT_TRUE(ran);
}

TEST(Verify, FalsifiedConstantsFailProbe) {
  const BuiltinPotential g = builtin("gaussian", 2);
  AssumptionParams bad = *g.a3;
  bad.L *= 0.5;
  bad.m *= 0.25;
  VerifyOptions o;
  o.suites = {"probe"};
  o.n_probe = 500;
  EXPECT_FALSE(verify_all(g.spec, bad, o).suite_pass("probe"));
}

TEST(Verify, ParameterErrorsBecomeFailedChecks) {
  const BuiltinPotential g = builtin("gaussian", 2);
  AssumptionParams bad = *g.a3;
  bad.L = 0.5;
  bad.m = 2.0;
  VerifyOptions o;
  o.suites = {"drift"};
  VerificationReport r;
  ASSERT_NO_THROW(r = verify_all(g.spec, bad, o));
  EXPECT_FALSE(r.suite_pass("drift"));
}

TEST(Verify, DefaultTestFunctionsHaveGaussianValues) {
  const BuiltinPotential g = builtin("gaussian", 1);
  const auto fns = default_test_functions(g.spec, 0.0625);
  ASSERT_EQ(fns.size(), 4u);
  EXPECT_DOUBLE_EQ(fns[0].pi_f, 0.0);
  EXPECT_DOUBLE_EQ(fns[1].pi_f, 1.0);
}

TEST(Verify, RateSlopeIsNearDiffusionRate) {
  // gaussian: E x_k decays like (1 - gamma)^k for ULA and close to it for MALA
  const BuiltinPotential g = builtin("gaussian", 1);
  const double gamma = 0.05;
  const auto fns = default_test_functions(g.spec, 0.0625);
  const RateEstimate r = estimate_rate(g.spec, gamma, Vec::Constant(1, 20.0), 4000, 400, 3, fns);
  const auto& s = r.series[0];
  ASSERT_FALSE(s.insufficient_signal);
  EXPECT_NEAR(s.slope, std::log(1 - gamma), 0.25 * gamma);
}

TEST(Verify, RateFromStationaryStartHasNoSignal) {
  const BuiltinPotential g = builtin("gaussian", 1);
  const auto fns = default_test_functions(g.spec, 0.0625);
  const RateEstimate r = estimate_rate(g.spec, 0.1, Vec::Zero(1), 2000, 100, 4, fns);
  EXPECT_TRUE(r.series[0].insufficient_signal);
}

TEST(Verify, RateRequiresHorizon) {
  const BuiltinPotential g = builtin("gaussian", 1);
  const auto fns = default_test_functions(g.spec, 0.0625);
  EXPECT_THROW(estimate_rate(g.spec, 0.1, Vec::Zero(1), 10, 5, 1, fns), Error);
}

TEST(Verify, InvarianceDetectsUlaBias) {
  const BuiltinPotential g = builtin("gaussian", 1);
  const Vec mu = Vec::Zero(1);
  const Mat s2 = Mat::Identity(1, 1);
  EXPECT_EQ(invariance_check(g.spec, KernelKind::MALA, 0.5, 100000, mu, s2, 4.0, 1).status, Status::Pass);
  EXPECT_EQ(invariance_check(g.spec, KernelKind::ULA, 0.5, 100000, mu, s2, 4.0, 1).status, Status::Fail);
}

TEST(Verify, ReportDoesNotDependOnThreadCount) {
  const BuiltinPotential g = builtin("bump", 2);
  VerifyOptions o;
  o.suites = {"drift", "tail", "minorization"};
  o.n_moment_mc = 2000;
  o.n_drift_mc = 500;
  o.n_tail = 20000;
  o.minorization.n_mc = 500;
  o.minorization.n_pairs = 200;
  set_num_threads(1);
  const nlohmann::json one = verify_all(g.spec, *g.a3, o).to_json();
  set_num_threads(3);
  const nlohmann::json three = verify_all(g.spec, *g.a3, o).to_json();
  set_num_threads(0);
  EXPECT_EQ(one, three);
}

}  // namespace
}  // namespace malacert
