/**
 * Copyright The malacert Authors.
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <cstddef>
#include <functional>

namespace malacert {

/// Worker count used by parallel_for; 0 restores the hardware default.
void set_num_threads(unsigned n);
unsigned num_threads();

/// Fixed number of independent random streams a Monte Carlo estimate is split into,
/// so that estimates do not depend on the thread count.
inline constexpr std::size_t kMcPartitions = 32;

/// Runs body(i) for i in [0, n) on up to num_threads() std::threads.
/// Work is split into contiguous chunks, so results written to slot i are
/// independent of the thread count. The first exception is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace malacert
