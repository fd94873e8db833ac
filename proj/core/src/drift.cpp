/**
 * Copyright The malacert Authors.
 * SPDX-License-Identifier: Apache-2.0
 */
#include "malacert/drift.hpp"

#include "malacert/errors.hpp"
#include "malacert/kernels.hpp"
#include "malacert/logmath.hpp"
#include "malacert/parallel.hpp"
#include "malacert/ratio.hpp"
#include "malacert/rng.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace malacert {

namespace {

std::vector<double> to_std(const Vec& v) { return {v.data(), v.data() + v.size()}; }

Vec random_direction(NoiseStream& rng, int d) {
  Vec v = rng.normal_vector(d);
  return v / v.norm();
}

double logsum3(double a, double b, double c) {
  const std::array<double, 3> xs{a, b, c};
  return logsumexp(xs);
}

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string(what) + " must be positive");
}

}  // namespace

double log_V(double eta, const Vec& x) {
  require_positive(eta, "eta");
  return eta * x.squaredNorm();
}

double log_W(double eta_beta, const Vec& x) {
  require_positive(eta_beta, "eta_beta");
  return eta_beta * std::sqrt(1.0 + x.squaredNorm());
}

double ula_V_moment_exact(const PotentialSpec& spec, const Vec& x, double gamma, double eta) {
  require_positive(gamma, "gamma");
  require_positive(eta, "eta");
  const double s = 4.0 * eta * gamma;
  if (s >= 1.0) throw DomainError("ula_V_moment_exact needs 4 eta gamma < 1");
  const Vec mu = x - gamma * spec.gradient(x);
  return -0.5 * spec.dim * std::log1p(-s) + eta * mu.squaredNorm() / (1.0 - s);
}

double sup_u_exp_term() { return 128.0 / std::numbers::e; }

QuadraticGrowth quadratic_growth_constants(const AssumptionParams& p) {
  const double Kt = 2.0 * p.K * (1.0 + p.L / p.m);
  return {Kt, p.L * Kt * Kt};
}

BetaGrowth quadratic_growth_constants_beta(const BetaParams& p, double L) {
  const double base = 4.0 * p.K_beta * (1.0 + L / p.m_beta);
  const double Kt = std::max(base, std::pow(base, 1.0 / (1.0 - p.beta)));
  const double kb = 2.0 * L * p.K_beta / p.L_beta;
  const double Kbar = std::max(kb, std::pow(kb, 1.0 / (1.0 - 0.75 * p.beta)));
  return {Kt, L * Kt * Kt, Kbar};
}

ConvexityRadius convexity_at_infinity_radius(const AssumptionParams& p) {
  return {0.5 * p.m, p.K + 8.0 * p.K * p.L / p.m};
}

bool hessian_perturbation_check(double gamma, double norm_x, double norm_z, double L,
                                const std::vector<double>& t_grid) {
  require_positive(gamma, "gamma");
  if (gamma > 1.0 / (4.0 * L)) throw DomainError("segment bound needs gamma <= 1/(4L)");
  if (norm_z > norm_x / (4.0 * std::sqrt(2.0 * gamma)) * (1.0 + 1e-15))
    throw DomainError("segment bound needs |z| <= |x| / (4 sqrt(2 gamma))");
  const double tol = 64.0 * std::numeric_limits<double>::epsilon() * norm_x;
  for (double t : t_grid) {
    if (t < 0.0 || t > 1.0) throw DomainError("t must lie in [0, 1]");
    const double lower = (1.0 - t * gamma * L) * norm_x - t * std::sqrt(2.0 * gamma) * norm_z;
    if (lower < 0.5 * norm_x - tol) return false;
  }
  return true;
}

double ula_log_b_U(const AssumptionParams& p, int d, double gb) {
  const double eta = p.m / 16.0;
  const double KU = std::max(quadratic_growth_constants(p).K_tilde, 4.0 * std::sqrt(d / p.m));
  const double S = p.m / 4.0 + (1.0 + 16.0 * eta * gb) * (4.0 * eta + 2.0 * p.L + gb * p.L * p.L);
  const double A = eta * S * KU * KU;
  return std::log(A + 4.0 * eta * d) + gb * A + 4.0 * eta * gb * d;
}

UlaDrift ula_drift_constants(const AssumptionParams& p, int d, double gb) {
  p.validate();
  require_positive(gb, "gamma_bar");
  if (gb > p.m / (4.0 * p.L * p.L)) throw DomainError("ULA drift needs gamma_bar <= m/(4 L^2)");
  const double KU = std::max(quadratic_growth_constants(p).K_tilde, 4.0 * std::sqrt(d / p.m));
  return {p.m / 16.0, KU, ula_log_b_U(p, d, gb)};
}

double mala_log_b_M(const DriftConstants& dc, const AssumptionParams& p, int d, double log_gb) {
  const double gb = std::exp(log_gb);
  const double KM2 = dc.K_M * dc.K_M;
  const double dd = static_cast<double>(d);
  return logsum3(ula_log_b_U(p, d, gb),
                 std::log(dc.eta_bar * p.m * KM2 / 16.0) + dc.eta_bar * KM2,
                 std::log(c1_bound(gb, p.L, p.require_M())) + 0.5 * log_gb +
                     std::log(dd + std::sqrt(3.0) * dd * dd + KM2));
}

DriftConstants mala_drift_constants(const AssumptionParams& p, int d, double upsilon,
                                    std::optional<double> gamma_bar) {
  p.validate();
  p.require_M();
  if (d < 1) throw InvalidParamError("d must be positive");
  if (!(upsilon > 0.0 && upsilon <= 1.0)) throw InvalidParamError("upsilon must lie in (0, 1]");
  DriftConstants dc;
  const double m = p.m, L = p.L;
  dc.eta_bar = m / 16.0;
  dc.K_tilde = quadratic_growth_constants(p).K_tilde;
  dc.K_U = std::max(dc.K_tilde, 4.0 * std::sqrt(d / m));
  dc.Gamma_half = std::min({upsilon, c2_gamma_max(L, m), 1.0 / d});
  dc.C2_Gamma_half = c2_bound(dc.Gamma_half, L, m);
  dc.b_half = dc.C2_Gamma_half * d + sup_u_exp_term();
  dc.K_half = std::max({16.0, 2.0 * p.K, dc.K_U, dc.K_tilde});
  dc.K_M = std::max(dc.K_half, 4.0 * std::sqrt(dc.b_half) / std::sqrt(m * dc.eta_bar));
  dc.Gamma = std::min({dc.Gamma_half, c2_gamma_max(L, m), 1.0 / d,
                       4.0 / (m * dc.eta_bar * dc.K_M * dc.K_M)});
  dc.varpi = dc.eta_bar * m * dc.K_M * dc.K_M / 16.0;
  double gb = dc.Gamma;
  if (gamma_bar) {
    require_positive(*gamma_bar, "gamma_bar");
    if (*gamma_bar > dc.Gamma) throw DomainError("gamma_bar exceeds the MALA drift radius Gamma");
    gb = *gamma_bar;
  }
  dc.log_gamma_bar = std::log(gb);
  dc.log_b_U = ula_log_b_U(p, d, gb);
  dc.log_b_M = mala_log_b_M(dc, p, d, dc.log_gamma_bar);
  return dc;
}

double ula_log_b_beta(const BetaParams& p, double L, int d, double gb) {
  const BetaGrowth g = quadratic_growth_constants_beta(p, L);
  const double eta = p.m_beta / 32.0;
  const double K = std::max({1.0, g.K_bar_beta, g.K_tilde_beta,
                             std::pow(32.0 * d / p.m_beta, 1.0 / (2.0 - p.beta))});
  const double A = eta * (L * (1.0 + 0.5 * L) * K * K + d + eta);
  const double tail = p.m_beta * eta * std::sqrt(1.0 + K * K) / (16.0 * (1.0 + std::pow(K, p.beta)));
  return std::log(A + tail) + gb * A;
}

UlaBetaDrift ula_beta_drift_constants(const BetaParams& p, double L, int d, double gb) {
  p.validate();
  require_positive(gb, "gamma_bar");
  if (gb > p.m_beta / (32.0 * p.L_beta * p.L_beta))
    throw DomainError("beta ULA drift needs gamma_bar <= m_beta/(2^5 L_beta^2)");
  const BetaGrowth g = quadratic_growth_constants_beta(p, L);
  const double K = std::max({1.0, g.K_bar_beta, g.K_tilde_beta,
                             std::pow(32.0 * d / p.m_beta, 1.0 / (2.0 - p.beta))});
  return {p.m_beta / 32.0, K, ula_log_b_beta(p, L, d, gb)};
}

double mala_beta_log_b(const BetaDriftConstants& dc, const BetaParams& p, double L, double M,
                       int d, double log_gb) {
  const double gb = std::exp(log_gb);
  const double Kt = dc.K_tilde_ray;
  const double dd = static_cast<double>(d);
  const double Kpow = std::pow(Kt, 1.0 - p.beta);
  // sqrt(1 + K^2) computed as K sqrt(1 + 1/K^2) to stay exact for huge K
  const double w = Kt * std::sqrt(1.0 + 1.0 / (Kt * Kt));
  return logsum3(ula_log_b_beta(p, L, d, gb),
                 std::log(dc.eta_beta * p.m_beta / 128.0) + std::log(Kpow) + dc.eta_beta * w,
                 std::log(c1_bound(gb, L, M)) + 0.5 * log_gb +
                     std::log(dd + std::sqrt(3.0) * dd * dd + Kt * Kt));
}

BetaDriftConstants mala_beta_drift_constants(const BetaParams& p, double L, double M, int d,
                                             double upsilon_beta, std::optional<double> gamma_bar) {
  p.validate();
  if (!(L > 0.0)) throw InvalidParamError("L must be positive");
  if (!(M >= 0.0)) throw AssumptionError("third-derivative bound M is required");
  if (!(upsilon_beta > 0.0 && upsilon_beta <= 1.0))
    throw InvalidParamError("upsilon_beta must lie in (0, 1]");
  BetaDriftConstants dc;
  const double mb = p.m_beta, Lb = p.L_beta;
  const BetaGrowth g = quadratic_growth_constants_beta(p, L);
  dc.eta_beta = mb / 32.0;
  dc.K_tilde_beta = g.K_tilde_beta;
  dc.K_bar_beta = g.K_bar_beta;
  dc.K_beta_ray = std::max({1.0, g.K_bar_beta, g.K_tilde_beta,
                            std::pow(32.0 * d / mb, 1.0 / (2.0 - p.beta))});
  dc.Gamma_half_beta = std::min({upsilon_beta, mb * mb * mb / (32.0 * std::pow(Lb, 4)), 1.0 / (8.0 * d)});
  dc.C2_beta_Gamma_half = c2_beta_bound(dc.Gamma_half_beta, L, Lb, mb);
  dc.b_half_beta = dc.C2_beta_Gamma_half * d + sup_u_exp_term();
  dc.K_half = std::max({1.0, 2.0 * p.K_beta, dc.K_beta_ray, 2.0 * g.K_tilde_beta, g.K_bar_beta});
  dc.K_tilde_ray = std::max(dc.K_half, std::pow(128.0 * dc.b_half_beta / (dc.eta_beta * mb),
                                                1.0 / (1.0 - p.beta)));
  const double Kpow = std::pow(dc.K_tilde_ray, 1.0 - p.beta);
  dc.Gamma_beta = std::min(dc.Gamma_half_beta, 32.0 / (mb * dc.eta_beta * Kpow));
  dc.varpi_beta = dc.eta_beta * mb * Kpow / 128.0;
  double gb = dc.Gamma_beta;
  if (gamma_bar) {
    require_positive(*gamma_bar, "gamma_bar");
    if (*gamma_bar > dc.Gamma_beta) throw DomainError("gamma_bar exceeds the beta drift radius Gamma_beta");
    gb = *gamma_bar;
  }
  dc.log_gamma_bar = std::log(gb);
  dc.log_b_beta = ula_log_b_beta(p, L, d, gb);
  dc.log_b_M_beta = mala_beta_log_b(dc, p, L, M, d, dc.log_gamma_bar);
  return dc;
}

double chi2_tail_log_bound(double c, double gamma, double norm_x, int d, double gamma_bar) {
  require_positive(c, "c");
  require_positive(gamma, "gamma");
  if (gamma > gamma_bar) throw DomainError("tail bound needs gamma <= gamma_bar");
  if (norm_x < std::sqrt(8.0 * gamma_bar * d / c))
    throw DomainError("tail bound needs |x| >= sqrt(8 gamma_bar d / c)");
  return -c * norm_x * norm_x / (4.0 * gamma);
}

VerificationReport ula_moment_mc_check(const PotentialSpec& spec, const std::vector<Vec>& xs,
                                       const std::vector<double>& gammas, double eta,
                                       long long n_mc, std::uint64_t seed, const McOptions& o) {
  if (xs.size() != gammas.size()) throw InvalidParamError("xs and gammas must have equal length");
  const std::size_t n = xs.size();
  std::vector<double> margin(n), z_score(n);
  NoiseStream base(seed, 0x756c616dull);
  parallel_for(n, [&](std::size_t i) {
    NoiseStream rng = base.substream(i);
    const double g = gammas[i];
    const Vec mu = xs[i] - g * spec.gradient(xs[i]);
    const double s = std::sqrt(2.0 * g);
    LogMeanExpAccumulator acc;
    Vec z(spec.dim);
    for (long long k = 0; k < n_mc; ++k) {
      rng.fill_normal(z);
      acc.add(eta * (mu + s * z).squaredNorm());
    }
    const LogMeanExp est = acc.result();
    const double exact = ula_V_moment_exact(spec, xs[i], g, eta);
    margin[i] = o.n_se * est.se - std::abs(est.value - exact);
    z_score[i] = std::abs(est.value - exact) / est.se;
  });
  MarginTracker mt;
  for (std::size_t i = 0; i < n; ++i)
    mt.observe(0.0, margin[i], {to_std(xs[i]), {gammas[i], z_score[i]}});
  VerificationReport rep;
  Check c = mt.to_check("drift", "ula_moment_exact_vs_mc (|diff| <= k se)", seed);
  c.n_samples = static_cast<long long>(n) * n_mc;
  rep.add(c);
  return rep;
}

VerificationReport ula_drift_exact_check(const PotentialSpec& spec, const AssumptionParams& p,
                                         const std::vector<Vec>& xs,
                                         const std::vector<double>& gammas) {
  VerificationReport rep;
  MarginTracker mt;
  Check err;
  err.suite = "drift";
  err.name = "ula_drift_exact (Q V <= e^{-eta m gamma |x|^2/4} V + b^U gamma 1_B)";
  try {
    const double gb = *std::max_element(gammas.begin(), gammas.end());
    const UlaDrift u = ula_drift_constants(p, spec.dim, gb);
    for (const Vec& x : xs) {
      for (double g : gammas) {
        const double lhs = ula_V_moment_exact(spec, x, g, u.eta_bar);
        const double lv = log_V(u.eta_bar, x);
        double rhs = lv - u.eta_bar * p.m * g * x.squaredNorm() / 4.0;
        if (x.norm() <= u.K_U) rhs = logaddexp(rhs, u.log_b_U + std::log(g));
        const double tol = 1e-12 * (std::abs(lhs) + std::abs(rhs) + 1.0);
        mt.observe_lazy(lhs - tol, rhs, [&] {
          return std::vector<std::vector<double>>{to_std(x), {g}};
        });
      }
    }
  } catch (const DomainError& e) {
    err.status = Status::Fail;
    err.detail = std::string("domain error: ") + e.what();
    rep.add(err);
    return rep;
  }
  rep.add(mt.to_check("drift", err.name, 0));
  return rep;
}

namespace {

// log of R_gamma f(x) sampled once: accept-weighted mix of f(y) and f(x) in log space
template <class LogF>
LogMeanExp mala_log_expectation(const PotentialSpec& spec, const Vec& x, double gamma,
                                long long n_mc, NoiseStream& rng, LogF&& log_f) {
  const double lfx = log_f(x);
  LogMeanExpAccumulator acc;
  Vec z(spec.dim);
  for (long long k = 0; k < n_mc; ++k) {
    rng.fill_normal(z);
    const double tau = tau_direct(spec, x, z, gamma);
    const Vec y = x - gamma * spec.gradient(x) + std::sqrt(2.0 * gamma) * z;
    if (tau <= 0.0) {
      acc.add(log_f(y));
    } else {
      acc.add(logaddexp(-tau + log_f(y), log1mexp(-tau) + lfx));
    }
  }
  return acc.result();
}

template <class LogF>
LogMeanExp ula_log_expectation(const PotentialSpec& spec, const Vec& x, double gamma,
                               long long n_mc, NoiseStream& rng, LogF&& log_f) {
  const Vec mu = x - gamma * spec.gradient(x);
  const double s = std::sqrt(2.0 * gamma);
  LogMeanExpAccumulator acc;
  Vec z(spec.dim);
  for (long long k = 0; k < n_mc; ++k) {
    rng.fill_normal(z);
    acc.add(log_f(Vec(mu + s * z)));
  }
  return acc.result();
}

template <class Est, class Rhs>
VerificationReport drift_mc(const std::string& name, const std::vector<Vec>& xs, long long n_mc,
                            std::uint64_t seed, std::uint64_t tag, const McOptions& o, Est&& est,
                            Rhs&& rhs) {
  const std::size_t n = xs.size();
  std::vector<double> lhs(n), r(n), se(n);
  NoiseStream base(seed, tag);
  parallel_for(n, [&](std::size_t i) {
    NoiseStream rng = base.substream(i);
    const LogMeanExp e = est(xs[i], rng);
    lhs[i] = e.value;
    se[i] = e.se;
    r[i] = rhs(xs[i]);
  });
  MarginTracker mt;
  for (std::size_t i = 0; i < n; ++i)
    mt.observe(lhs[i] - o.n_se * se[i], r[i], {to_std(xs[i]), {lhs[i], se[i], r[i]}});
  VerificationReport rep;
  Check c = mt.to_check("drift", name, seed);
  c.n_samples = static_cast<long long>(n) * n_mc;
  rep.add(c);
  return rep;
}

}  // namespace

VerificationReport mala_drift_check(const PotentialSpec& spec, const DriftConstants& dc,
                                    double gamma, const std::vector<Vec>& xs, long long n_mc,
                                    std::uint64_t seed, const McOptions& o) {
  require_positive(gamma, "gamma");
  if (gamma > dc.Gamma * (1.0 + 1e-12)) throw DomainError("mala_drift_check needs gamma <= Gamma");
  const double eta = dc.eta_bar;
  auto lf = [eta](const Vec& v) { return eta * v.squaredNorm(); };
  return drift_mc(
      "mala_drift (R V <= (1 - varpi gamma) V + b^M gamma 1_B)", xs, n_mc, seed, 0x6d616c61ull, o,
      [&](const Vec& x, NoiseStream& rng) { return mala_log_expectation(spec, x, gamma, n_mc, rng, lf); },
      [&](const Vec& x) {
        double r = std::log1p(-dc.varpi * gamma) + lf(x);
        if (x.norm() <= dc.K_M) r = logaddexp(r, dc.log_b_M + std::log(gamma));
        return r;
      });
}

VerificationReport ula_beta_drift_check(const PotentialSpec& spec, const BetaParams& p, double L,
                                        double gamma, const std::vector<Vec>& xs, long long n_mc,
                                        std::uint64_t seed, const McOptions& o) {
  const UlaBetaDrift u = ula_beta_drift_constants(p, L, spec.dim, gamma);
  const double eta = u.eta_beta;
  auto lf = [eta](const Vec& v) { return eta * std::sqrt(1.0 + v.squaredNorm()); };
  return drift_mc(
      "ula_beta_drift (Q W <= e^{-gamma m_b eta |x|/(16(1+|x|^b))} W + gamma b_b 1_B)", xs, n_mc,
      seed, 0x756c6162ull, o,
      [&](const Vec& x, NoiseStream& rng) { return ula_log_expectation(spec, x, gamma, n_mc, rng, lf); },
      [&](const Vec& x) {
        const double r = x.norm();
        double rhs = lf(x) - gamma * p.m_beta * eta * r / (16.0 * (1.0 + std::pow(r, p.beta)));
        if (r <= u.K_ray_beta) rhs = logaddexp(rhs, u.log_b_beta + std::log(gamma));
        return rhs;
      });
}

VerificationReport mala_beta_drift_check(const PotentialSpec& spec, const BetaDriftConstants& dc,
                                         double gamma, const std::vector<Vec>& xs, long long n_mc,
                                         std::uint64_t seed, const McOptions& o) {
  require_positive(gamma, "gamma");
  if (gamma > dc.Gamma_beta * (1.0 + 1e-12))
    throw DomainError("mala_beta_drift_check needs gamma <= Gamma_beta");
  const double eta = dc.eta_beta;
  auto lf = [eta](const Vec& v) { return eta * std::sqrt(1.0 + v.squaredNorm()); };
  return drift_mc(
      "mala_beta_drift (R W <= (1 - varpi_b gamma) W + b gamma 1_B)", xs, n_mc, seed,
      0x6d616c62ull, o,
      [&](const Vec& x, NoiseStream& rng) { return mala_log_expectation(spec, x, gamma, n_mc, rng, lf); },
      [&](const Vec& x) {
        double r = std::log1p(-dc.varpi_beta * gamma) + lf(x);
        if (x.norm() <= dc.K_tilde_ray) r = logaddexp(r, dc.log_b_M_beta + std::log(gamma));
        return r;
      });
}

VerificationReport chi2_tail_check(double c, double gamma, double norm_x, int d, double gamma_bar,
                                   long long n_mc, std::uint64_t seed, const McOptions& o) {
  const double log_bound = chi2_tail_log_bound(c * o.tail_c_scale, gamma, norm_x, d, gamma_bar);
  const double thr2 = c / gamma * norm_x * norm_x;
  std::vector<long long> hits(kMcPartitions, 0);
  const std::size_t parts = hits.size();
  NoiseStream base(seed, 0x63686932ull);
  parallel_for(parts, [&](std::size_t w) {
    NoiseStream rng = base.substream(w);
    const long long lo = n_mc * static_cast<long long>(w) / static_cast<long long>(parts);
    const long long hi = n_mc * static_cast<long long>(w + 1) / static_cast<long long>(parts);
    Vec z(d);
    long long h = 0;
    for (long long k = lo; k < hi; ++k) {
      rng.fill_normal(z);
      if (z.squaredNorm() >= thr2) ++h;
    }
    hits[w] = h;
  });
  long long total = 0;
  for (long long h : hits) total += h;
  const double p_hat = static_cast<double>(total) / static_cast<double>(n_mc);
  const double se = std::sqrt(std::max(p_hat * (1.0 - p_hat), 1.0 / n_mc) / n_mc);
  MarginTracker mt;
  mt.observe(p_hat - o.n_se * se, std::exp(log_bound), {{c, gamma, norm_x, static_cast<double>(d)}, {p_hat, se}});
  VerificationReport rep;
  Check ch = mt.to_check("tail", "chi2_tail (P(|Z| >= sqrt(c/gamma)|x|) <= e^{-c|x|^2/(4 gamma)})", seed);
  ch.n_samples = n_mc;
  // the bound must dominate the estimate itself, not only within noise
  if (p_hat > std::exp(log_bound)) ch.status = Status::Fail;
  rep.add(ch);
  return rep;
}

VerificationReport growth_lemma_checks(const PotentialSpec& spec, const AssumptionParams& p,
                                       long long n, double radius, std::uint64_t seed) {
  const int d = spec.dim;
  VerificationReport rep;
  const double eps64 = 64.0 * std::numeric_limits<double>::epsilon();

  {  // monotonicity at infinity with m/2 for |x| v |y| >= K + 8KL/m
    const ConvexityRadius cr = convexity_at_infinity_radius(p);
    NoiseStream rng(seed, 0x61316d6full);
    MarginTracker mt;
    for (long long i = 0; i < n; ++i) {
      const Vec x = (cr.radius + rng.uniform() * radius) * random_direction(rng, d);
      const Vec y = (rng.uniform() * (cr.radius + radius)) * random_direction(rng, d);
      const Vec dxy = x - y;
      const double lhs = cr.m_prime * dxy.squaredNorm();
      const double rhs = (spec.gradient(x) - spec.gradient(y)).dot(dxy);
      mt.observe_lazy(lhs - eps64 * (std::abs(lhs) + std::abs(rhs)), rhs, [&] {
        return std::vector<std::vector<double>>{to_std(x), to_std(y)};
      });
    }
    rep.add(mt.to_check("growth", "monotone_at_infinity (<gU(x)-gU(y),x-y> >= m/2 |x-y|^2)", seed));
  }
  {  // <grad U(x), x> >= (m/2)|x|^2 - C~ 1{|x| <= K~}
    const QuadraticGrowth q = quadratic_growth_constants(p);
    NoiseStream rng(seed, 0x61326772ull);
    MarginTracker mt;
    for (long long i = 0; i < n; ++i) {
      const Vec x = (rng.uniform() * (q.K_tilde + radius)) * random_direction(rng, d);
      double lhs = 0.5 * p.m * x.squaredNorm();
      if (x.norm() <= q.K_tilde) lhs -= q.C_tilde;
      const double rhs = spec.gradient(x).dot(x);
      mt.observe_lazy(lhs - eps64 * (std::abs(lhs) + std::abs(rhs)), rhs,
                      [&] { return std::vector<std::vector<double>>{to_std(x)}; });
    }
    rep.add(mt.to_check("growth", "quadratic_growth (<gU(x),x> >= m/2 |x|^2 - C~ 1_B)", seed));
  }
  {  // |x + t(-gamma grad U(x) + sqrt(2 gamma) z)| >= |x|/2
    NoiseStream rng(seed, 0x61357365ull);
    MarginTracker mt;
    const double g_max = 1.0 / (4.0 * p.L);
    for (long long i = 0; i < n; ++i) {
      const double gamma = g_max * std::exp(-6.0 * rng.uniform()) * (i % 4 == 0 ? 1.0 : rng.uniform());
      const Vec x = (1e-3 + rng.uniform() * radius) * random_direction(rng, d);
      const double z_max = x.norm() / (4.0 * std::sqrt(2.0 * gamma));
      const Vec z = (i % 2 == 0 ? z_max : z_max * rng.uniform()) * random_direction(rng, d);
      const Vec dir = -gamma * spec.gradient(x) + std::sqrt(2.0 * gamma) * z;
      for (double t : {0.0, 0.25, 0.5, 0.75, 1.0, rng.uniform()}) {
        const double lhs = 0.5 * x.norm();
        const double rhs = (x + t * dir).norm();
        mt.observe_lazy(lhs - eps64 * lhs, rhs, [&] {
          return std::vector<std::vector<double>>{to_std(x), to_std(z), {gamma, t}};
        });
      }
    }
    rep.add(mt.to_check("growth", "segment_norm (|x_t| >= |x|/2)", seed));
  }
  return rep;
}

VerificationReport beta_growth_lemma_checks(const PotentialSpec& spec, const BetaParams& p,
                                            double L, long long n, double radius,
                                            std::uint64_t seed) {
  const int d = spec.dim;
  const BetaGrowth g = quadratic_growth_constants_beta(p, L);
  const double eps64 = 64.0 * std::numeric_limits<double>::epsilon();
  VerificationReport rep;
  {
    NoiseStream rng(seed, 0x61336267ull);
    MarginTracker mt;
    for (long long i = 0; i < n; ++i) {
      const Vec x = (rng.uniform() * (g.K_tilde_beta + radius)) * random_direction(rng, d);
      const double r = x.norm();
      double lhs = 0.5 * p.m_beta * r * r / (1.0 + std::pow(r, p.beta));
      if (r <= g.K_tilde_beta) lhs -= g.C_tilde_beta;
      const double rhs = spec.gradient(x).dot(x);
      mt.observe_lazy(lhs - eps64 * (std::abs(lhs) + std::abs(rhs)), rhs,
                      [&] { return std::vector<std::vector<double>>{to_std(x)}; });
    }
    rep.add(mt.to_check("growth", "beta_quadratic_growth", seed));
  }
  {
    NoiseStream rng(seed, 0x61346267ull);
    MarginTracker mt;
    for (long long i = 0; i < n; ++i) {
      const Vec x = (g.K_bar_beta + rng.uniform() * radius) * random_direction(rng, d);
      const double r = x.norm();
      const double lhs = spec.gradient(x).norm();
      const double rhs = 2.0 * p.L_beta * r / (1.0 + std::pow(r, 0.75 * p.beta));
      mt.observe_lazy(lhs - eps64 * lhs, rhs, [&] { return std::vector<std::vector<double>>{to_std(x)}; });
    }
    rep.add(mt.to_check("growth", "beta_gradient_upper (|gU| <= 2 L_b |x|/(1+|x|^{3b/4}))", seed));
  }
  return rep;
}

}  // namespace malacert
