/**
 * Copyright The malacert Authors.
 * SPDX-License-Identifier: Apache-2.0
 */
#include "malacert/quadrature.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

namespace malacert {
namespace {

TEST(Quadrature, WeightsSumToOneAndNodesInside) {
  for (int n : {1, 2, 5, 16, 64, 1024}) {
    const QuadratureRule& q = gauss_legendre_01(n);
    ASSERT_EQ(q.nodes.size(), static_cast<std::size_t>(n));
    EXPECT_NEAR(std::accumulate(q.weights.begin(), q.weights.end(), 0.0), 1.0, 1e-13);
    for (double t : q.nodes) {
      EXPECT_GT(t, 0.0);
      EXPECT_LT(t, 1.0);
    }
  }
}

TEST(Quadrature, ExactForPolynomialsUpToDegree2nMinus1) {
  for (int n : {3, 8, 16}) {
    const QuadratureRule& q = gauss_legendre_01(n);
    for (int k = 0; k <= 2 * n - 1; ++k) {
      double s = 0;
      for (std::size_t i = 0; i < q.nodes.size(); ++i) s += q.weights[i] * std::pow(q.nodes[i], k);
      EXPECT_NEAR(s, 1.0 / (k + 1), 1e-14) << "n=" << n << " k=" << k;
    }
  }
}

TEST(Quadrature, CachedRuleIsStable) {
  EXPECT_EQ(&gauss_legendre_01(32), &gauss_legendre_01(32));
}

TEST(Quadrature, SmoothIntegrand) {
  const QuadratureRule& q = gauss_legendre_01(16);
  double s = 0;
  for (std::size_t i = 0; i < q.nodes.size(); ++i) s += q.weights[i] * std::exp(q.nodes[i]);
  EXPECT_NEAR(s, std::exp(1.0) - 1.0, 1e-15);
}

}  // namespace
}  // namespace malacert
