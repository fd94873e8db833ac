/**
 * Copyright The malacert Authors.
 * SPDX-License-Identifier: Apache-2.0
 */
#include "malacert/ratio.hpp"

#include "malacert/drift.hpp"
#include "malacert/errors.hpp"
#include "malacert/kernels.hpp"
#include "malacert/quadrature.hpp"
#include "malacert/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace malacert {

double TauTerms::recombine() const {
  const double s = std::sqrt(gamma);
  return gamma * a2 + gamma * s * a3 + gamma * gamma * a4 + gamma * gamma * s * a5 +
         gamma * gamma * gamma * a6;
}

TauTerms tau_decomposed(const PotentialSpec& spec, const Vec& x, const Vec& z, double gamma,
                        int order) {
  if (order < 2) throw InvalidParamError("quadrature order must be >= 2");
  if (!(gamma > 0.0)) throw DomainError("gamma must be positive");
  const QuadratureRule& q = gauss_legendre_01(order);
  const Vec g = spec.gradient(x);
  const Vec dir = -gamma * g + std::sqrt(2.0 * gamma) * z;
  const int d = spec.dim;
  Vec hz_int = Vec::Zero(d), hg_int = Vec::Zero(d);
  TauTerms t;
  for (int i = 0; i < order; ++i) {
    const double ti = q.nodes[i], wi = q.weights[i];
    const Mat H = spec.hess(x + ti * dir);
    const Vec hz = H * z;
    const Vec hg = H * g;
    t.a2 += wi * z.dot(hz) * (0.5 - ti);
    t.a3 += wi * z.dot(hg) * (ti - 0.25);
    t.a4 -= wi * g.dot(hg) * ti;
    hz_int += wi * hz;
    hg_int += wi * hg;
  }
  t.a2 *= 2.0;
  t.a3 *= 2.0 * std::numbers::sqrt2;
  t.a4 += 0.5 * hz_int.squaredNorm();
  t.a5 = -hg_int.dot(hz_int) / std::numbers::sqrt2;
  t.a6 = 0.25 * hg_int.squaredNorm();
  t.quadrature_order = order;
  t.gamma = gamma;
  t.value = t.recombine();
  if (!std::isfinite(t.value)) throw NonFiniteError("tau decomposition is not finite");
  return t;
}

TauTerms tau_decomposed_adaptive(const PotentialSpec& spec, const Vec& x, const Vec& z,
                                 double gamma, int order, double tol, int max_order) {
  TauTerms prev = tau_decomposed(spec, x, z, gamma, order);
  for (int n = 2 * order; n <= max_order; n *= 2) {
    TauTerms next = tau_decomposed(spec, x, z, gamma, n);
    if (std::abs(next.value - prev.value) <= tol) return next;
    prev = next;
  }
  return prev;
}

double c1_bound(double gb, double L, double M) {
  if (!(gb >= 0.0) || L < 0.0 || M < 0.0) throw DomainError("c1_bound needs gamma_bar, L, M >= 0");
  const double sg = std::sqrt(gb);
  const double inner =
      std::max({1.0, sg, gb * L, std::pow(gb * std::pow(L, 4.0 / 3.0), 1.5)});
  return 2.0 * std::max({std::numbers::sqrt2 * M, sg * M * L, 2.0 * L * L * inner});
}

double c2_gamma_max(double L, double m) { return m * m * m / (4.0 * L * L * L * L); }

double c2_bound(double gb, double L, double m) {
  if (!(gb > 0.0) || gb > c2_gamma_max(L, m))
    throw DomainError("c2_bound needs 0 < gamma_bar <= m^3/(4 L^4)");
  const double L2 = L * L, L3 = L2 * L;
  const double eps = (m * m * m / 16.0) /
                     (std::numbers::sqrt2 * L2 + std::pow(2.0, -1.5) * std::sqrt(gb) * L3);
  return 2.0 * L + std::numbers::sqrt2 * L2 / eps + 0.5 * gb * L2 +
         std::pow(2.0, -1.5) * std::pow(gb, 1.5) * L3 / eps;
}

double c2_beta_gamma_max(double L, double Lb, double mb) {
  return std::min(1.0 / (4.0 * L), mb * mb * mb / (16.0 * Lb * Lb * Lb * Lb));
}

double c2_beta_bound(double gb, double L, double Lb, double mb) {
  if (!(gb > 0.0) || gb > c2_beta_gamma_max(L, Lb, mb))
    throw DomainError("c2_beta_bound needs 0 < gamma_bar <= min(1/(4L), m_beta^3/(16 L_beta^4))");
  const double Lb2 = Lb * Lb, Lb3 = Lb2 * Lb;
  const double eps = (mb * mb * mb / 16.0) /
                     (std::pow(2.0, 1.5) * Lb2 + std::pow(2.0, -0.5) * std::sqrt(gb) * Lb3);
  return 2.0 * L + std::pow(2.0, 1.5) * Lb2 / eps + 0.5 * gb * L * L +
         std::pow(2.0, -0.5) * std::pow(gb, 1.5) * Lb3 / eps;
}

double tau_roundoff(const PotentialSpec& spec, const Vec& x, const Vec& z, double gamma) {
  const Vec gx = spec.gradient(x);
  const Vec y = x - gamma * gx + std::sqrt(2.0 * gamma) * z;
  const Vec w = z - std::sqrt(0.5 * gamma) * (gx + spec.gradient(y));
  const double scale = std::abs(spec.value(x)) + std::abs(spec.value(y)) +
                       0.5 * (w.squaredNorm() + z.squaredNorm());
  return 64.0 * std::numeric_limits<double>::epsilon() * scale;
}

namespace {

std::vector<double> to_std(const Vec& v) { return {v.data(), v.data() + v.size()}; }

double log_uniform(NoiseStream& rng, double lo, double hi) {
  return std::exp(std::log(lo) + rng.uniform() * (std::log(hi) - std::log(lo)));
}

Vec random_direction(NoiseStream& rng, int d) {
  Vec v = rng.normal_vector(d);
  return v / v.norm();
}

}  // namespace

VerificationReport check_tau_bounds(const PotentialSpec& spec, const AssumptionParams& params,
                                    double gamma_bar, long long n, std::uint64_t seed,
                                    const TauCheckOptions& opts) {
  if (!(gamma_bar > 0.0)) throw DomainError("gamma_bar must be positive");
  const int d = spec.dim;
  VerificationReport rep;
  const double gmin_factor = std::pow(10.0, -opts.gamma_decades);

  // Lemma: |tau| <= C1 gamma^{3/2} (|z|^2 + |z|^4 + |x|^2) for all x, z
  if (params.M) {
    const double C1 = c1_bound(gamma_bar, params.L, *params.M);
    NoiseStream rng(seed, 0x74617531ull);
    MarginTracker mt;
    for (long long i = 0; i < n; ++i) {
      const double gamma = log_uniform(rng, gamma_bar * gmin_factor, gamma_bar);
      const Vec x = log_uniform(rng, 1e-3, opts.x_radius) * random_direction(rng, d);
      const Vec z = log_uniform(rng, 1e-2, 10.0) / std::sqrt(static_cast<double>(d)) *
                    rng.normal_vector(d);
      const double tau = tau_direct(spec, x, z, gamma);
      const double z2 = z.squaredNorm();
      const double rhs = C1 * std::pow(gamma, 1.5) * (z2 + z2 * z2 + x.squaredNorm());
      mt.observe_lazy(std::abs(tau) - tau_roundoff(spec, x, z, gamma), rhs, [&] {
        return std::vector<std::vector<double>>{to_std(x), to_std(z), {gamma}};
      });
    }
    rep.add(mt.to_check("tau", "abs_tau <= C1 gamma^1.5 (|z|^2+|z|^4+|x|^2)", seed));
  } else {
    Check c;
    c.suite = "tau";
    c.name = "abs_tau <= C1 gamma^1.5 (|z|^2+|z|^4+|x|^2)";
    c.detail = "skipped: M not declared";
    c.seed = seed;
    rep.add(c);
  }

  // Lemma: tau <= C2 gamma |z|^2 for |x| >= max(2K, K~), |z| <= |x| / (4 sqrt(2 gamma))
  {
    const double gb = std::min(gamma_bar, c2_gamma_max(params.L, params.m));
    const double C2 = c2_bound(gb, params.L, params.m);
    const double r_min = std::max({2.0 * params.K, quadratic_growth_constants(params).K_tilde, 1e-3});
    const double r_max = std::max(opts.x_radius, 2.0 * r_min);
    NoiseStream rng(seed, 0x74617532ull);
    MarginTracker mt;
    for (long long i = 0; i < n; ++i) {
      const double gamma = log_uniform(rng, gb * gmin_factor, gb);
      const Vec x = log_uniform(rng, r_min, r_max) * random_direction(rng, d);
      const double z_max = x.norm() / (4.0 * std::sqrt(2.0 * gamma));
      Vec z = rng.normal_vector(d);
      if (i % 2 == 1 || z.norm() > z_max) z = z_max * rng.uniform() * random_direction(rng, d);
      const double tau = tau_direct(spec, x, z, gamma);
      mt.observe_lazy(tau - tau_roundoff(spec, x, z, gamma), C2 * gamma * z.squaredNorm(), [&] {
        return std::vector<std::vector<double>>{to_std(x), to_std(z), {gamma}};
      });
    }
    rep.add(mt.to_check("tau", "tau <= C2 gamma |z|^2 (outside ball)", seed));
  }
  return rep;
}

}  // namespace malacert
