/**
 * Copyright The malacert Authors.
 * SPDX-License-Identifier: Apache-2.0
 */
#include "malacert/logmath.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

namespace malacert {
namespace {

TEST(LogMath, LogAddExpHandlesInfinities) {
  EXPECT_DOUBLE_EQ(logaddexp(0.0, 0.0), std::log(2.0));
  EXPECT_EQ(logaddexp(kNegInf, 3.0), 3.0);
  EXPECT_EQ(logaddexp(kNegInf, kNegInf), kNegInf);
  EXPECT_DOUBLE_EQ(logaddexp(1000.0, 1000.0), 1000.0 + std::log(2.0));
}

TEST(LogMath, LogSumExpOfEmptyIsNegInf) {
  std::vector<double> xs;
  EXPECT_EQ(logsumexp(xs), kNegInf);
  xs = {1.0, 2.0, 3.0};
  EXPECT_NEAR(logsumexp(xs), std::log(std::exp(1.0) + std::exp(2.0) + std::exp(3.0)), 1e-15);
}

TEST(LogMath, Log1mExpIsAccurateNearZeroAndFarAway) {
  EXPECT_NEAR(log1mexp(-1e-20), std::log(1e-20), 1e-12);
  EXPECT_NEAR(log1mexp(-50.0), -std::exp(-50.0), 1e-30);
  EXPECT_NEAR(log1mexp(-std::log(2.0)), -std::log(2.0), 1e-15);
}

TEST(LogMath, Log1mFromLogForUnderflowingProbability) {
  EXPECT_EQ(log1m_from_log(-66000.0), -0.0);
  EXPECT_NEAR(log1m_from_log(std::log(0.25)), std::log(0.75), 1e-15);
  const double p = std::exp(std::log(1e-13));
  EXPECT_NEAR(log1m_from_log(std::log(1e-13)), -p - 0.5 * p * p, 1e-28);
}

TEST(LogMath, NormalTailAgreesWithErfcOnOverlapWindow) {
  for (double t = 6.0; t <= 10.0; t += 0.125) {
    const double direct = std::log(0.5 * std::erfc(t / std::numbers::sqrt2));
    EXPECT_NEAR(log_normal_cdf_neg_tail(t), direct, 1e-10 * std::abs(direct)) << t;
  }
}

TEST(LogMath, NormalTailIsContinuousAtSwitch) {
  const double below = log_normal_cdf_neg(8.0);
  const double above = log_normal_cdf_neg(std::nextafter(8.0, 9.0));
  EXPECT_NEAR(below, above, 1e-12 * std::abs(below));
}

TEST(LogMath, ThreeTermAsymptoticConvergesToTail) {
  double prev = 1.0;
  for (double t : {6.0, 8.0, 12.0, 20.0, 40.0}) {
    const double err = std::abs(log_normal_cdf_neg_asymptotic(t) - log_normal_cdf_neg(t));
    EXPECT_LT(err, 16.0 / std::pow(t, 6)) << t;
    EXPECT_LT(err, prev);
    prev = err;
  }
}

TEST(LogMath, NormalTailStaysFiniteFarBeyondUnderflow) {
  const double t = 365.0;
  const double v = log_normal_cdf_neg(t);
  EXPECT_TRUE(std::isfinite(v));
  EXPECT_NEAR(v, -0.5 * t * t - std::log(t * std::sqrt(2.0 * std::numbers::pi)), 1e-4);
}

TEST(LogMath, NormalCdfSymmetry) {
  EXPECT_DOUBLE_EQ(normal_cdf(0.0), 0.5);
  EXPECT_NEAR(normal_cdf(1.0) + normal_cdf(-1.0), 1.0, 1e-16);
}

TEST(LogMath, LogMeanExpMatchesDirectAverage) {
  std::vector<double> xs{0.1, -2.0, 3.5, 1.0};
  double s = 0.0;
  for (double x : xs) s += std::exp(x);
  const LogMeanExp r = log_mean_exp(xs);
  EXPECT_NEAR(r.value, std::log(s / 4.0), 1e-14);
  EXPECT_GT(r.se, 0.0);
}

TEST(LogMath, AccumulatorMergeEqualsSinglePass) {
  LogMeanExpAccumulator a, b, all;
  for (int i = 0; i < 100; ++i) {
    const double x = 700.0 + 0.37 * i - 0.002 * i * i;
    (i % 3 == 0 ? a : b).add(x);
    all.add(x);
  }
  a.merge(b);
  EXPECT_EQ(a.count(), all.count());
  EXPECT_NEAR(a.result().value, all.result().value, 1e-12);
  EXPECT_NEAR(a.result().se, all.result().se, 1e-12);
}

TEST(LogMath, AccumulatorSurvivesHugeExponents) {
  LogMeanExpAccumulator acc;
  acc.add(1e5);
  acc.add(1e5 + std::log(3.0));
  EXPECT_NEAR(acc.result().value, 1e5 + std::log(2.0), 1e-9);
}

}  // namespace
}  // namespace malacert
