/**
 * Copyright The malacert Authors.
 * SPDX-License-Identifier: Apache-2.0
 */
#include "malacert/minorization.hpp"

#include "malacert/drift.hpp"
#include "malacert/errors.hpp"
#include "malacert/kernels.hpp"
#include "malacert/logmath.hpp"
#include "malacert/parallel.hpp"
#include "malacert/ratio.hpp"
#include "malacert/rng.hpp"

#include <algorithm>
#include <cmath>

namespace malacert {

namespace {

std::vector<double> to_std(const Vec& v) { return {v.data(), v.data() + v.size()}; }

double poly_term(int d) {
  const double dd = d;
  return dd + std::sqrt(3.0) * dd * dd;
}

struct MeanSe {
  double mean;
  double se;
};

MeanSe mean_se(const std::vector<double>& v) {
  const double n = static_cast<double>(v.size());
  double s = 0.0;
  for (double x : v) s += x;
  const double mu = s / n;
  double ss = 0.0;
  for (double x : v) ss += (x - mu) * (x - mu);
  return {mu, std::sqrt(ss / (n - 1.0) / n)};
}

}  // namespace

double clamp_radius(double log_r) { return std::max(std::exp(log_r), kRadiusFloor); }

double log_epsilon_of_K(double K, double L) {
  if (!(K >= 0.0)) throw DomainError("epsilon_of_K needs K >= 0");
  if (!(L > 0.0)) throw DomainError("epsilon_of_K needs L > 0");
  return std::log(2.0) + log_normal_cdf_neg(std::sqrt(3.0 * (L + 1.0)) * K);
}

double epsilon_of_K(double K, double L) { return std::exp(log_epsilon_of_K(K, L)); }

double tilde_b_ula(double gamma_bar, const AssumptionParams& p, int d) {
  if (!(gamma_bar > 0.0) || gamma_bar > p.m / (4.0 * p.L * p.L))
    throw DomainError("tilde_b_ula needs 0 < gamma_bar <= m/(4L^2)");
  const double r = std::max(quadratic_growth_constants(p).K_tilde, 2.0 * std::sqrt(2.0 * d / p.m));
  return 2.0 * d + r * r * (gamma_bar * p.L * p.L + 2.0 * p.L + 0.5 * p.m);
}

double tv_diff_one_step_bound(const Vec& x, double gamma, double gamma_bar,
                              const AssumptionParams& p) {
  if (!(gamma > 0.0) || gamma > gamma_bar) throw DomainError("tv bound needs 0 < gamma <= gamma_bar");
  const double c1 = c1_bound(gamma_bar, p.L, p.require_M());
  const int d = static_cast<int>(x.size());
  return std::min(2.0, c1 * std::pow(gamma, 1.5) * (poly_term(d) + x.squaredNorm()));
}

double tv_diff_horizon_bound(const Vec& x, double gamma, double gamma_bar,
                             const AssumptionParams& p) {
  if (!(gamma > 0.0) || gamma > gamma_bar) throw DomainError("tv bound needs 0 < gamma <= gamma_bar");
  const int d = static_cast<int>(x.size());
  const double bt = tilde_b_ula(gamma_bar, p, d);
  const double c1 = c1_bound(gamma_bar, p.L, p.require_M());
  return std::min(2.0, c1 * std::sqrt(gamma) * (poly_term(d) + x.squaredNorm() + 2.0 * bt / p.m));
}

double log_gamma_tilde_K(double K, const AssumptionParams& p, int d, double upsilon_tilde) {
  if (!(upsilon_tilde > 0.0)) throw InvalidParamError("upsilon_tilde must be positive");
  const double gh = std::min(upsilon_tilde, p.m / (4.0 * p.L * p.L));
  const double den = 2.0 * c1_bound(gh, p.L, p.require_M()) *
                     (poly_term(d) + K * K + 2.0 * tilde_b_ula(gh, p, d) / p.m);
  return std::min(std::log(gh), 2.0 * (log_epsilon_of_K(K, p.L) - std::log(den)));
}

double gamma_tilde_K(double K, const AssumptionParams& p, int d, double upsilon_tilde) {
  return clamp_radius(log_gamma_tilde_K(K, p, d, upsilon_tilde));
}

double L_gamma_bar(double gamma_bar, double L) { return 2.0 * L + gamma_bar * L * L; }

double moment_growth_bound(const Vec& x, long long k, double gamma, double gamma_bar, double L,
                           int d) {
  if (!(gamma > 0.0) || gamma > gamma_bar) throw DomainError("moment bound needs 0 < gamma <= gamma_bar");
  if (k < 0) throw DomainError("k must be nonnegative");
  if (k == 0) return x.squaredNorm();
  const double r = gamma * L_gamma_bar(gamma_bar, L);
  return std::exp(k * r) * x.squaredNorm() + 2.0 * gamma * d * k * std::exp((k - 1) * r);
}

double log_gamma_hat_K(double K, double L, double M, int d, double upsilon_hat) {
  if (!(upsilon_hat > 0.0)) throw InvalidParamError("upsilon_hat must be positive");
  const double gh = std::min(upsilon_hat, 1.0 / L);
  const double den = 2.0 * c1_bound(gh, L, M) *
                     (poly_term(d) + std::exp(L_gamma_bar(gh, L)) * (K * K + 2.0 * d));
  return std::min(std::log(gh), 2.0 * (log_epsilon_of_K(K, L) - std::log(den)));
}

double gamma_hat_K(double K, double L, double M, int d, double upsilon_hat) {
  return clamp_radius(log_gamma_hat_K(K, L, M, d, upsilon_hat));
}

MinorizationConstants minorization_constants(double K, const AssumptionParams& p, int d,
                                             double upsilon_tilde, double upsilon_hat) {
  MinorizationConstants mc;
  mc.K = K;
  mc.log_epsilon_K = log_epsilon_of_K(K, p.L);
  mc.epsilon_K = std::exp(mc.log_epsilon_K);
  mc.Gamma_tilde_half = std::min(upsilon_tilde, p.m / (4.0 * p.L * p.L));
  mc.b_tilde_U = tilde_b_ula(mc.Gamma_tilde_half, p, d);
  mc.log_Gamma_tilde_K = log_gamma_tilde_K(K, p, d, upsilon_tilde);
  mc.Gamma_tilde_K = clamp_radius(mc.log_Gamma_tilde_K);
  mc.Gamma_hat_half = std::min(upsilon_hat, 1.0 / p.L);
  mc.L_gamma_bar = L_gamma_bar(mc.Gamma_hat_half, p.L);
  mc.log_Gamma_hat_K = log_gamma_hat_K(K, p.L, p.require_M(), d, upsilon_hat);
  mc.Gamma_hat_K = clamp_radius(mc.log_Gamma_hat_K);
  return mc;
}

VerificationReport second_moment_drift_check(const PotentialSpec& spec, const AssumptionParams& p,
                                             std::uint64_t seed,
                                             const MinorizationCheckOptions& o) {
  const int d = spec.dim;
  const double gb = p.m / (4.0 * p.L * p.L);
  const double bt = tilde_b_ula(gb, p, d);
  const auto n = static_cast<std::size_t>(o.n_points);
  std::vector<Vec> xs(n);
  std::vector<double> gammas(n), lhs(n), rhs(n), se(n);
  NoiseStream pick(seed, 0x6d326472ull);
  for (std::size_t i = 0; i < n; ++i) {
    Vec v = pick.normal_vector(d);
    xs[i] = (pick.uniform() * o.x_radius / v.norm()) * v;
    gammas[i] = gb * std::exp(-4.0 * pick.uniform());
    if (i % 5 == 0) gammas[i] = gb;
  }
  NoiseStream base(seed, 0x6d326d63ull);
  parallel_for(n, [&](std::size_t i) {
    NoiseStream rng = base.substream(i);
    const Vec mu = xs[i] - gammas[i] * spec.gradient(xs[i]);
    const double s = std::sqrt(2.0 * gammas[i]);
    std::vector<double> v(static_cast<std::size_t>(o.n_mc));
    Vec z(d);
    for (auto& e : v) {
      rng.fill_normal(z);
      e = (mu + s * z).squaredNorm();
    }
    const MeanSe ms = mean_se(v);
    lhs[i] = ms.mean;
    se[i] = ms.se;
    rhs[i] = (1.0 - 0.5 * p.m * gammas[i]) * xs[i].squaredNorm() + gammas[i] * bt;
  });
  MarginTracker mt;
  for (std::size_t i = 0; i < n; ++i)
    mt.observe(lhs[i] - o.n_se * se[i], rhs[i], {to_std(xs[i]), {gammas[i], lhs[i], se[i]}});
  VerificationReport rep;
  Check c = mt.to_check("minorization", "second_moment_drift (E|Y|^2 <= (1-m gamma/2)|x|^2 + gamma b~)", seed);
  c.n_samples = static_cast<long long>(n) * o.n_mc;
  rep.add(c);
  return rep;
}

VerificationReport moment_growth_check(const PotentialSpec& spec, double L, const Vec& x,
                                       double gamma, int k_max, std::uint64_t seed,
                                       const MinorizationCheckOptions& o) {
  const int d = spec.dim;
  const auto n = static_cast<std::size_t>(o.n_mc);
  // sums[k] over chains, per partition
  const std::size_t parts = kMcPartitions;
  std::vector<std::vector<double>> s1(parts, std::vector<double>(k_max + 1, 0.0));
  std::vector<std::vector<double>> s2 = s1;
  NoiseStream base(seed, 0x6d677277ull);
  parallel_for(parts, [&](std::size_t w) {
    NoiseStream rng = base.substream(w);
    Vec z(d);
    for (std::size_t c = n * w / parts; c < n * (w + 1) / parts; ++c) {
      Vec y = x;
      for (int k = 0; k <= k_max; ++k) {
        if (k > 0) {
          rng.fill_normal(z);
          y = ula_step(y, spec, gamma, z);
        }
        const double q = y.squaredNorm();
        s1[w][k] += q;
        s2[w][k] += q * q;
      }
    }
  });
  MarginTracker mt;
  for (int k = 0; k <= k_max; ++k) {
    double a = 0.0, b = 0.0;
    for (std::size_t w = 0; w < parts; ++w) {
      a += s1[w][k];
      b += s2[w][k];
    }
    const double nn = static_cast<double>(n);
    const double mean = a / nn;
    const double var = std::max(b / nn - mean * mean, 0.0) * nn / (nn - 1.0);
    const double se = std::sqrt(var / nn);
    const double rhs = moment_growth_bound(x, k, gamma, gamma, L, d);
    mt.observe(mean - o.n_se * se - 1e-12 * mean, rhs, {to_std(x), {gamma, static_cast<double>(k), mean, se}});
  }
  VerificationReport rep;
  Check c = mt.to_check("minorization", "moment_growth (E|Y_k|^2 <= e^{k gamma L} |x|^2 + ...)", seed);
  c.n_samples = static_cast<long long>(n) * k_max;
  rep.add(c);
  return rep;
}

VerificationReport tv_one_step_check(const PotentialSpec& spec, const AssumptionParams& p,
                                     std::uint64_t seed, const MinorizationCheckOptions& o) {
  const int d = spec.dim;
  const double gb = p.m / (4.0 * p.L * p.L);
  const auto n = static_cast<std::size_t>(o.n_points);
  std::vector<Vec> xs(n);
  std::vector<double> gammas(n), lhs(n), se(n), rhs(n);
  NoiseStream pick(seed, 0x74763170ull);
  for (std::size_t i = 0; i < n; ++i) {
    Vec v = pick.normal_vector(d);
    xs[i] = (pick.uniform() * o.x_radius / v.norm()) * v;
    gammas[i] = gb * std::exp(-6.0 * pick.uniform());
  }
  NoiseStream base(seed, 0x7476316dull);
  parallel_for(n, [&](std::size_t i) {
    NoiseStream rng = base.substream(i);
    std::vector<double> v(static_cast<std::size_t>(o.n_mc));
    Vec z(d);
    for (auto& e : v) {
      rng.fill_normal(z);
      e = 2.0 * (1.0 - acceptance_probability(tau_direct(spec, xs[i], z, gammas[i])));
    }
    const MeanSe ms = mean_se(v);
    lhs[i] = ms.mean;
    se[i] = ms.se;
    rhs[i] = tv_diff_one_step_bound(xs[i], gammas[i], gb, p);
  });
  MarginTracker mt;
  for (std::size_t i = 0; i < n; ++i)
    mt.observe(lhs[i] - o.n_se * se[i], rhs[i], {to_std(xs[i]), {gammas[i], lhs[i], se[i]}});
  VerificationReport rep;
  Check c = mt.to_check("minorization", "tv_one_step (2 E[1 - alpha] <= C1 gamma^{3/2}(...))", seed);
  c.n_samples = static_cast<long long>(n) * o.n_mc;
  rep.add(c);
  return rep;
}

VerificationReport small_set_coupling_check(const PotentialSpec& spec, const AssumptionParams& p,
                                            const Vec& x0, const Vec& y0, double K,
                                            std::uint64_t seed, const MinorizationCheckOptions& o) {
  const int d = spec.dim;
  const double log_gt = log_gamma_tilde_K(K, p, d);
  const double gamma = std::max(0.5 * std::exp(log_gt), o.coupling_gamma_floor);
  const auto block = static_cast<long long>(std::ceil(1.0 / gamma));
  const double s = std::sqrt(2.0 * gamma);
  const std::size_t parts = kMcPartitions;
  std::vector<long long> unmatched(parts, 0);
  const auto n = static_cast<std::size_t>(o.n_pairs);
  NoiseStream base(seed, 0x63706c67ull);
  parallel_for(parts, [&](std::size_t w) {
    NoiseStream rng = base.substream(w);
    Vec z(d), z2(d);
    for (std::size_t c = n * w / parts; c < n * (w + 1) / parts; ++c) {
      Vec x = x0, y = y0;
      bool met = false;
      for (long long k = 0; k < block; ++k) {
        rng.fill_normal(z);
        if (met) {
          const double u = rng.uniform();
          x = mala_step({x, 0, 0}, spec, gamma, z, u).state.x;
          y = x;
          continue;
        }
        // reflection maximal coupling of the two Gaussian proposals
        const Vec mx = x - gamma * spec.gradient(x);
        const Vec my = y - gamma * spec.gradient(y);
        const Vec delta = (mx - my) / s;
        const double dn = delta.norm();
        const double lu = std::log(rng.uniform());
        bool same = false;
        if (dn == 0.0) {
          z2 = z;
          same = true;
        } else if (lu <= -0.5 * (z + delta).squaredNorm() + 0.5 * z.squaredNorm()) {
          z2 = z + delta;
          same = true;
        } else {
          const Vec e = delta / dn;
          z2 = z - 2.0 * e.dot(z) * e;
        }
        const double u = rng.uniform();
        const MalaStepResult rx = mala_step({x, 0, 0}, spec, gamma, z, u);
        const MalaStepResult ry = mala_step({y, 0, 0}, spec, gamma, z2, u);
        x = rx.state.x;
        y = ry.state.x;
        if (same && rx.accepted && ry.accepted) met = true;
      }
      if (!met) ++unmatched[w];
    }
  });
  long long total = 0;
  for (long long u : unmatched) total += u;
  const double frac = static_cast<double>(total) / static_cast<double>(n);
  const double se = std::sqrt(std::max(frac * (1.0 - frac), 1.0 / n) / n);
  const double bound = 2.0 * (1.0 - 0.5 * epsilon_of_K(K, p.L));
  MarginTracker mt;
  mt.observe(2.0 * frac - o.n_se * 2.0 * se, bound,
             {to_std(x0), to_std(y0), {gamma, static_cast<double>(block), frac}});
  VerificationReport rep;
  Check c = mt.to_check("minorization", "small_set_coupling (TV of block laws <= 2(1 - eps(K)/2))", seed, 0.0,
                        "simulated at gamma = max(Gamma_tilde_K/2, floor); Gamma_tilde_K = exp(" +
                            std::to_string(log_gt) + ")");
  c.n_samples = static_cast<long long>(n);
  rep.add(c);
  return rep;
}

}  // namespace malacert
