/**
 * Copyright The malacert Authors.
 * SPDX-License-Identifier: Apache-2.0
 */
#include "malacert/kernels.hpp"

#include "malacert/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

namespace malacert {

namespace {

void require_gamma(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw DomainError("stepsize gamma must be positive");
}

// tau from cached U and gradients at both ends
double tau_from(double ux, const Vec& gx, double uy, const Vec& gy, const Vec& z, double gamma) {
  const double c = std::sqrt(0.5 * gamma);
  return uy - ux + 0.5 * ((z - c * (gx + gy)).squaredNorm() - z.squaredNorm());
}

}  // namespace

Vec ula_step(const Vec& x, const PotentialSpec& spec, double gamma, const Vec& z) {
  require_gamma(gamma);
  Vec y = x - gamma * spec.gradient(x) + std::sqrt(2.0 * gamma) * z;
  if (!y.allFinite()) throw NonFiniteError("ula_step overflow");
  return y;
}

double proposal_log_density(const PotentialSpec& spec, const Vec& x, const Vec& y, double gamma) {
  require_gamma(gamma);
  const double d = spec.dim;
  const double r = -0.5 * d * std::log(4.0 * std::numbers::pi * gamma) -
                   (y - x + gamma * spec.gradient(x)).squaredNorm() / (4.0 * gamma);
  if (std::isnan(r)) throw NonFiniteError("proposal_log_density is NaN");
  return r;
}

double tau_direct(const PotentialSpec& spec, const Vec& x, const Vec& z, double gamma) {
  require_gamma(gamma);
  const Vec gx = spec.gradient(x);
  const Vec y = x - gamma * gx + std::sqrt(2.0 * gamma) * z;
  const double t = tau_from(spec.value(x), gx, spec.value(y), spec.gradient(y), z, gamma);
  if (!std::isfinite(t)) throw NonFiniteError("tau_direct is not finite");
  return t;
}

double tau_via_densities(const PotentialSpec& spec, const Vec& x, const Vec& z, double gamma) {
  const Vec y = ula_step(x, spec, gamma, z);
  return spec.value(y) - spec.value(x) - proposal_log_density(spec, y, x, gamma) +
         proposal_log_density(spec, x, y, gamma);
}

double acceptance_probability(double tau) { return tau <= 0.0 ? 1.0 : std::exp(-tau); }

MalaStepResult mala_step(const ChainState& state, const PotentialSpec& spec, double gamma,
                         const Vec& z, double u) {
  const double tau = tau_direct(spec, state.x, z, gamma);
  MalaStepResult r{state, false, tau};
  r.state.step_index += 1;
  if (std::log(u) <= -std::max(0.0, tau)) {
    r.accepted = true;
    r.state.x = ula_step(state.x, spec, gamma, z);
    r.state.accepted_count += 1;
  }
  return r;
}

std::string to_string(KernelKind k) { return k == KernelKind::ULA ? "ula" : "mala"; }

KernelKind kernel_from_string(const std::string& name) {
  std::string s = name;
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "ula") return KernelKind::ULA;
  if (s == "mala") return KernelKind::MALA;
  throw ConfigError("unknown kernel '" + s + "' (expected ula or mala)");
}

Trajectory run_chain(KernelKind kind, const PotentialSpec& spec, const Vec& x0, double gamma,
                     std::int64_t n_steps, NoiseStream& stream, const ChainOptions& opts) {
  require_gamma(gamma);
  if (n_steps < 1) throw InvalidParamError("run_chain needs n_steps >= 1");
  if (opts.thin < 1) throw InvalidParamError("thin must be >= 1");
  if (x0.size() != spec.dim) throw DimensionError("x0 has wrong length");
  const int d = spec.dim;
  const double s = std::sqrt(2.0 * gamma);

  Trajectory tr;
  tr.kind = kind;
  tr.n_steps = n_steps;
  tr.mean = Vec::Zero(d);
  tr.second_moment = Vec::Zero(d);
  double sum_log_v = 0.0;
  if (opts.keep_path) {
    const auto rows = static_cast<std::size_t>(n_steps / opts.thin);
    tr.steps.reserve(rows);
    tr.positions.reserve(rows);
    if (kind == KernelKind::MALA) tr.accepted.reserve(rows);
  }

  Vec x = x0;
  Vec gx = spec.gradient(x);
  double ux = spec.value(x);
  Vec z(d), y(d);
  std::int64_t n_acc = 0;
  for (std::int64_t k = 1; k <= n_steps; ++k) {
    stream.fill_normal(z);
    y.noalias() = x - gamma * gx + s * z;
    bool acc = true;
    if (kind == KernelKind::ULA) {
      x.swap(y);
      gx = spec.gradient(x);
    } else {
      const double u = stream.uniform();
      Vec gy = spec.gradient(y);
      const double uy = spec.value(y);
      const double tau = tau_from(ux, gx, uy, gy, z, gamma);
      if (std::isnan(tau)) throw NonFiniteError("tau is NaN", k);
      acc = std::log(u) <= -std::max(0.0, tau);
      if (acc) {
        x.swap(y);
        gx.swap(gy);
        ux = uy;
        ++n_acc;
      }
    }
    if (!x.allFinite() || !gx.allFinite()) throw NonFiniteError("chain state became non-finite", k);
    tr.mean += x;
    tr.second_moment += x.cwiseAbs2();
    if (opts.log_v_eta) sum_log_v += *opts.log_v_eta * x.squaredNorm();
    if (opts.keep_path && k % opts.thin == 0) {
      tr.steps.push_back(k);
      tr.positions.push_back(x);
      if (kind == KernelKind::MALA) tr.accepted.push_back(acc ? 1 : 0);
    }
  }
  const double n = static_cast<double>(n_steps);
  tr.mean /= n;
  tr.second_moment /= n;
  if (kind == KernelKind::MALA) tr.acceptance_rate = static_cast<double>(n_acc) / n;
  if (opts.log_v_eta) tr.mean_log_v = sum_log_v / n;
  tr.final_x = x;
  return tr;
}

void Trajectory::write_csv(std::ostream& os) const {
  const int d = positions.empty() ? static_cast<int>(final_x.size())
                                  : static_cast<int>(positions.front().size());
  os << "step,accepted";
  for (int i = 0; i < d; ++i) os << ",x_" << i;
  os << '\n';
  const auto old = os.precision(17);
  for (std::size_t r = 0; r < positions.size(); ++r) {
    os << steps[r] << ',';
    if (kind == KernelKind::MALA) os << static_cast<int>(accepted[r]);
    for (int i = 0; i < d; ++i) os << ',' << positions[r][i];
    os << '\n';
  }
  os.precision(old);
}

}  // namespace malacert
