/**
 * Copyright The malacert Authors.
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <vector>

namespace malacert {

struct QuadratureRule {
  std::vector<double> nodes;    // in (0, 1)
  std::vector<double> weights;  // sum to 1
};

/// Gauss-Legendre rule of the given order mapped to [0, 1]. Cached, thread-safe.
const QuadratureRule& gauss_legendre_01(int order);

}  // namespace malacert
