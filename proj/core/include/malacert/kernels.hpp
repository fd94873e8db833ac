/**
 * Copyright The malacert Authors.
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include "malacert/potential.hpp"
#include "malacert/rng.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace malacert {

/// x - gamma grad U(x) + sqrt(2 gamma) z.
Vec ula_step(const Vec& x, const PotentialSpec& spec, double gamma, const Vec& z);

/// log r_gamma(x, y) = -(d/2) log(4 pi gamma) - |y - x + gamma grad U(x)|^2 / (4 gamma).
double proposal_log_density(const PotentialSpec& spec, const Vec& x, const Vec& y, double gamma);

/// Acceptance exponent: min(1, e^{-tau}) is the MALA acceptance probability of the
/// proposal y = ula_step(x, z). Computed as
/// U(y) - U(x) + (|z - sqrt(gamma/2)(grad U(x) + grad U(y))|^2 - |z|^2) / 2.
double tau_direct(const PotentialSpec& spec, const Vec& x, const Vec& z, double gamma);

/// Same quantity through the Metropolis-Hastings ratio of proposal densities.
double tau_via_densities(const PotentialSpec& spec, const Vec& x, const Vec& z, double gamma);

/// Acceptance probability min(1, e^{-tau}).
double acceptance_probability(double tau);

struct ChainState {
  Vec x;
  std::int64_t step_index = 0;
  std::int64_t accepted_count = 0;
};

struct MalaStepResult {
  ChainState state;
  bool accepted;
  double tau;
};

/// One MALA transition; accepts iff log u <= -max(0, tau).
MalaStepResult mala_step(const ChainState& state, const PotentialSpec& spec, double gamma,
                         const Vec& z, double u);

enum class KernelKind { ULA, MALA };

std::string to_string(KernelKind k);
KernelKind kernel_from_string(const std::string& s);

struct ChainOptions {
  int thin = 1;
  bool keep_path = true;
  std::optional<double> log_v_eta;  // accumulate the mean of eta |x|^2 when set
};

struct Trajectory {
  KernelKind kind = KernelKind::MALA;
  std::int64_t n_steps = 0;
  std::vector<std::int64_t> steps;
  std::vector<Vec> positions;
  std::vector<std::int8_t> accepted;  // per retained step, MALA only
  double acceptance_rate = 0.0;       // MALA only
  Vec mean;                           // over all steps
  Vec second_moment;                  // per coordinate, over all steps
  std::optional<double> mean_log_v;
  Vec final_x;

  /// header `step,accepted,x_0,...,x_{d-1}`; accepted column is empty for ULA.
  void write_csv(std::ostream& os) const;
};

/// Runs n_steps transitions from x0. Deterministic in (seed, stream_id).
/// NonFiniteError carries the failing step index.
Trajectory run_chain(KernelKind kind, const PotentialSpec& spec, const Vec& x0, double gamma,
                     std::int64_t n_steps, NoiseStream& stream, const ChainOptions& opts = {});

}  // namespace malacert
