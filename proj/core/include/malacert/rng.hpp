/**
 * Copyright The malacert Authors.
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <Eigen/Core>

#include <array>
#include <cstdint>

namespace malacert {

/// Philox4x32-10 block function.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                           std::array<std::uint32_t, 2> key);

/**
 * Counter-based variate stream keyed by (seed, stream_id).
 *
 * Uniforms take the top 53 bits of a 64-bit word and are offset by half an
 * ulp, so they lie strictly inside (0, 1). Normals use the Box-Muller pair
 * transform; the second member of each pair is cached.
 */
class NoiseStream {
 public:
  NoiseStream(std::uint64_t seed, std::uint64_t stream_id, std::uint64_t counter = 0)
      : seed_(seed), stream_id_(stream_id), counter_(counter) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }
  std::uint64_t counter() const { return counter_; }

  std::uint64_t next_u64();
  double uniform();
  double normal();
  Eigen::VectorXd normal_vector(int d);
  void fill_normal(Eigen::Ref<Eigen::VectorXd> out);

  /// Independent stream derived from this one's seed.
  NoiseStream substream(std::uint64_t id) const;

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t counter_;
  std::array<std::uint32_t, 4> block_{};
  int block_pos_ = 4;
  bool has_cached_normal_ = false;
  double cached_normal_ = 0.0;
};

}  // namespace malacert
