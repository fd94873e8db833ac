/**
 * Copyright The malacert Authors.
 * SPDX-License-Identifier: Apache-2.0
 */
#include "malacert/verify.hpp"

#include "malacert/certificate.hpp"
#include "malacert/drift.hpp"
#include "malacert/errors.hpp"
#include "malacert/logmath.hpp"
#include "malacert/parallel.hpp"
#include "malacert/ratio.hpp"
#include "malacert/rng.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>

namespace malacert {

namespace {

constexpr double kClipV = 1e6;

Vec unit(NoiseStream& rng, int d) {
  Vec v = rng.normal_vector(d);
  return v / v.norm();
}

Vec e1(int d, double r) {
  Vec v = Vec::Zero(d);
  v(0) = r;
  return v;
}

double log_spaced(double lo, double hi, int i, int n) {
  if (n <= 1) return hi;
  return lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
}

Check skipped(const std::string& suite, const std::string& name, const std::string& why,
              std::uint64_t seed) {
  Check c;
  c.suite = suite;
  c.name = name;
  c.status = Status::Skipped;
  c.detail = "skipped: " + why;
  c.seed = seed;
  return c;
}

// Runs one check; library errors while building constants become a failed check.
template <class F>
void guarded(VerificationReport& rep, const std::string& suite, const std::string& name,
             std::uint64_t seed, F&& body) {
  try {
    VerificationReport r = body();
    for (Check& c : r.checks) c.suite = suite;
    rep.merge(r);
  } catch (const Error& e) {
    Check c;
    c.suite = suite;
    c.name = name;
    c.status = Status::Fail;
    c.worst_margin = std::numeric_limits<double>::quiet_NaN();
    c.detail = std::string("error: ") + e.what();
    c.seed = seed;
    rep.add(c);
  }
}

VerificationReport single(Check c) {
  VerificationReport r;
  r.add(std::move(c));
  return r;
}

bool selected(const VerifyOptions& o, const std::string& s) {
  return o.suites.empty() || o.suites.count(s) > 0;
}

bool is_standard_gaussian(const PotentialSpec& spec) { return spec.name == "gaussian"; }

// Moments of pi proportional to e^{-U} on a 1-d grid.
struct Quadrature1d {
  std::vector<double> x, w;  // normalized weights
};

Quadrature1d quadrature_1d(const PotentialSpec& spec, double half_width = 40.0, int n = 40001) {
  Quadrature1d q;
  q.x.resize(n);
  q.w.resize(n);
  std::vector<double> lu(n);
  double lmax = kNegInf;
  for (int i = 0; i < n; ++i) {
    q.x[i] = -half_width + 2.0 * half_width * i / (n - 1);
    lu[i] = -spec.value(Vec::Constant(1, q.x[i]));
    lmax = std::max(lmax, lu[i]);
  }
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    // Simpson weights
    const double c = (i == 0 || i == n - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    q.w[i] = c * std::exp(lu[i] - lmax);
    s += q.w[i];
  }
  for (double& w : q.w) w /= s;
  return q;
}

double quad_expect(const Quadrature1d& q, const std::function<double(const Vec&)>& f) {
  double s = 0.0;
  for (std::size_t i = 0; i < q.x.size(); ++i) s += q.w[i] * f(Vec::Constant(1, q.x[i]));
  return s;
}

// E min(eta Q, C) and E min(e^{eta Q}, B) for Q chi-square with d degrees of freedom.
double gaussian_clipped_log_v(double eta, int d, double C) {
  const double q = C / eta, a = 0.5 * d;
  return eta * d * boost::math::gamma_p(a + 1.0, 0.5 * q) + C * boost::math::gamma_q(a, 0.5 * q);
}

double gaussian_clipped_v(double eta, int d, double B) {
  if (!(eta < 0.5)) throw DomainError("clipped V moment needs eta < 1/2");
  const double q = std::log(B) / eta, a = 0.5 * d;
  return std::pow(1.0 - 2.0 * eta, -a) * boost::math::gamma_p(a, 0.5 * q * (1.0 - 2.0 * eta)) +
         B * boost::math::gamma_q(a, 0.5 * q);
}

struct MeanSe {
  double mean, se;
};

MeanSe batch_means(const std::vector<double>& s) {
  const std::size_t n = s.size();
  const std::size_t nb = std::max<std::size_t>(2, static_cast<std::size_t>(std::sqrt(static_cast<double>(n))));
  const std::size_t b = n / nb;
  std::vector<double> m(nb, 0.0);
  for (std::size_t j = 0; j < nb; ++j) {
    for (std::size_t i = j * b; i < (j + 1) * b; ++i) m[j] += s[i];
    m[j] /= static_cast<double>(b);
  }
  double mu = 0.0;
  for (double v : m) mu += v;
  mu /= static_cast<double>(nb);
  double ss = 0.0;
  for (double v : m) ss += (v - mu) * (v - mu);
  return {mu, std::sqrt(ss / (nb - 1.0) / nb)};
}

// ---- suites ----

void suite_probe(VerificationReport& rep, const PotentialSpec& spec,
                 const std::optional<AssumptionParams>& a3, const std::optional<BetaParams>& beta,
                 double L, const VerifyOptions& o) {
  const std::string s = "probe";
  if (a3)
    guarded(rep, s, "probe_assumptions", o.seed,
            [&] { return probe_assumptions(spec, *a3, o.n_probe, o.probe_radius, o.seed); });
  if (beta)
    guarded(rep, s, "probe_beta_assumptions", o.seed,
            [&] { return probe_assumptions(spec, *beta, L, o.n_probe, o.probe_radius, o.seed); });
}

void suite_growth(VerificationReport& rep, const PotentialSpec& spec,
                  const std::optional<AssumptionParams>& a3, const std::optional<BetaParams>& beta,
                  double L, const VerifyOptions& o) {
  const std::string s = "growth";
  if (a3)
    guarded(rep, s, "growth_lemmas", o.seed,
            [&] { return growth_lemma_checks(spec, *a3, o.n_growth, o.probe_radius, o.seed); });
  if (beta)
    guarded(rep, s, "beta_growth_lemmas", o.seed, [&] {
      return beta_growth_lemma_checks(spec, *beta, L, o.n_growth, o.probe_radius, o.seed);
    });
}

void suite_tau(VerificationReport& rep, const PotentialSpec& spec,
               const std::optional<AssumptionParams>& a3, const VerifyOptions& o) {
  const std::string s = "tau";
  if (!a3) {
    rep.add(skipped(s, "tau_bounds", "needs the strong convexity constants (m, K)", o.seed));
    return;
  }
  guarded(rep, s, "tau_bounds", o.seed, [&] {
    return check_tau_bounds(spec, *a3, c2_gamma_max(a3->L, a3->m), o.n_tau, o.seed);
  });
}

void suite_drift(VerificationReport& rep, const PotentialSpec& spec,
                 const std::optional<AssumptionParams>& a3, const std::optional<BetaParams>& beta,
                 double L, std::optional<double> M, const VerifyOptions& o) {
  const std::string s = "drift";
  const int d = spec.dim;
  const McOptions mco{o.n_se, 1.0};
  if (a3) {
    const AssumptionParams& p = *a3;
    const double gb = p.m / (4.0 * p.L * p.L);
    const double eta = p.m / 16.0;
    const double KU = std::max(quadratic_growth_constants(p).K_tilde, 4.0 * std::sqrt(d / p.m));
    guarded(rep, s, "ula_moment_exact_vs_mc", o.seed, [&] {
      NoiseStream rng(o.seed, 0x70616972ull);
      std::vector<Vec> xs;
      std::vector<double> gs;
      for (int i = 0; i < o.n_moment_pairs; ++i) {
        xs.push_back(log_spaced(0.1, 3.0 * KU, i, o.n_moment_pairs) * unit(rng, d));
        gs.push_back(gb * std::pow(10.0, -3.0 * ((7 * i) % o.n_moment_pairs) /
                                             std::max(1, o.n_moment_pairs - 1)));
      }
      return ula_moment_mc_check(spec, xs, gs, eta, o.n_moment_mc, o.seed, mco);
    });
    guarded(rep, s, "ula_drift_exact", o.seed, [&] {
      NoiseStream rng(o.seed, 0x67726964ull);
      std::vector<Vec> xs;
      std::vector<double> gs;
      const double r_max = 3.0 * std::max(KU, 1.0);
      for (int i = 0; i < o.n_exact_x; ++i)
        xs.push_back(r_max * i / std::max(1, o.n_exact_x - 1) * unit(rng, d));
      for (int j = 0; j < o.n_exact_gamma; ++j) gs.push_back(log_spaced(1e-4 * gb, gb, j, o.n_exact_gamma));
      return ula_drift_exact_check(spec, p, xs, gs);
    });
    if (p.M) {
      guarded(rep, s, "mala_drift", o.seed, [&] {
        const DriftConstants dc = mala_drift_constants(p, d);
        NoiseStream rng(o.seed, 0x6d647074ull);
        std::vector<Vec> xs;
        for (int i = 0; i < o.n_drift_points; ++i)
          xs.push_back(log_spaced(0.05 * dc.K_M, 3.0 * dc.K_M, i, o.n_drift_points) * unit(rng, d));
        return mala_drift_check(spec, dc, 0.5 * dc.Gamma, xs, o.n_drift_mc, o.seed, mco);
      });
    } else {
      rep.add(skipped(s, "mala_drift", "M not declared", o.seed));
    }
  }
  if (beta) {
    const BetaParams& b = *beta;
    guarded(rep, s, "ula_beta_drift", o.seed, [&] {
      const double g = b.m_beta / (32.0 * b.L_beta * b.L_beta);
      const UlaBetaDrift u = ula_beta_drift_constants(b, L, d, g);
      NoiseStream rng(o.seed, 0x75626474ull);
      std::vector<Vec> xs;
      for (int i = 0; i < o.n_drift_points; ++i)
        xs.push_back(log_spaced(0.1, 3.0 * u.K_ray_beta, i, o.n_drift_points) * unit(rng, d));
      return ula_beta_drift_check(spec, b, L, g, xs, o.n_drift_mc, o.seed, mco);
    });
    if (M) {
      guarded(rep, s, "mala_beta_drift", o.seed, [&] {
        const BetaDriftConstants dc = mala_beta_drift_constants(b, L, *M, d);
        NoiseStream rng(o.seed, 0x6d626474ull);
        std::vector<Vec> xs;
        for (int i = 0; i < o.n_drift_points; ++i)
          xs.push_back(log_spaced(0.1, 3.0 * dc.K_tilde_ray, i, o.n_drift_points) * unit(rng, d));
        return mala_beta_drift_check(spec, dc, 0.5 * dc.Gamma_beta, xs, o.n_drift_mc, o.seed, mco);
      });
    } else {
      rep.add(skipped(s, "mala_beta_drift", "M not declared", o.seed));
    }
  }
}

void suite_tail(VerificationReport& rep, const PotentialSpec& spec,
                const std::optional<AssumptionParams>& a3, double L, const VerifyOptions& o) {
  const std::string s = "tail";
  const int d = spec.dim;
  guarded(rep, s, "chi2_tail", o.seed, [&] {
    const double c = 1.0 / 32.0;
    const double gb = a3 ? std::min(1.0, a3->m / (4.0 * a3->L * a3->L)) : 1.0 / (4.0 * L);
    // |x|^2 chosen so that the bound is e^{-4}, or the smallest admissible radius if larger
    const double r2 = std::max(16.0 * gb / c, 8.0 * gb * d / c);
    McOptions mco{o.n_se, o.inject.tail_c_scale};
    return chi2_tail_check(c, gb, std::sqrt(r2), d, gb, o.n_tail, o.seed, mco);
  });
}

void suite_minorization(VerificationReport& rep, const PotentialSpec& spec,
                        const std::optional<AssumptionParams>& a3, double L,
                        const VerifyOptions& o) {
  const std::string s = "minorization";
  const int d = spec.dim;
  guarded(rep, s, "moment_growth", o.seed, [&] {
    return moment_growth_check(spec, L, e1(d, 2.0), o.moment_growth_gamma, o.moment_growth_k,
                               o.seed, o.minorization);
  });
  if (!a3) return;
  guarded(rep, s, "second_moment_drift", o.seed,
          [&] { return second_moment_drift_check(spec, *a3, o.seed, o.minorization); });
  if (!a3->M) {
    rep.add(skipped(s, "tv_one_step", "M not declared", o.seed));
    return;
  }
  guarded(rep, s, "tv_one_step", o.seed,
          [&] { return tv_one_step_check(spec, *a3, o.seed, o.minorization); });
  guarded(rep, s, "small_set_coupling", o.seed, [&] {
    return small_set_coupling_check(spec, *a3, e1(d, -2.0), e1(d, 2.0), 2.0, o.seed, o.minorization);
  });
}

void suite_reversibility(VerificationReport& rep, const PotentialSpec& spec,
                         const VerifyOptions& o) {
  const std::string s = "reversibility";
  if (spec.dim != 1) {
    rep.add(skipped(s, "detailed_balance_1d", "grid check needs d = 1", o.seed));
    return;
  }
  guarded(rep, s, "detailed_balance_1d", o.seed, [&] {
    MarginTracker mt;
    for (double g : o.reversibility_gammas) {
      const double r = verify_reversibility_1d(spec, g, o.reversibility_half_width,
                                               o.reversibility_grid, !o.inject.drop_acceptance);
      mt.observe(r, o.reversibility_tol, {{g, r}});
    }
    Check c = mt.to_check(s, "detailed_balance_1d (max residual <= tol)", o.seed);
    c.n_samples = static_cast<long long>(o.reversibility_gammas.size()) * o.reversibility_grid *
                  o.reversibility_grid;
    return single(c);
  });
}

void suite_invariance(VerificationReport& rep, const PotentialSpec& spec, const VerifyOptions& o) {
  const std::string s = "invariance";
  const int d = spec.dim;
  Vec mean;
  Mat m2;
  if (is_standard_gaussian(spec)) {
    mean = Vec::Zero(d);
    m2 = Mat::Identity(d, d);
  } else if (d == 1) {
    const Quadrature1d q = quadrature_1d(spec);
    mean = Vec::Constant(1, quad_expect(q, [](const Vec& x) { return x(0); }));
    m2 = Mat::Constant(1, 1, quad_expect(q, [](const Vec& x) { return x(0) * x(0); }));
  } else {
    rep.add(skipped(s, "stationary_moments", "no reference moments for this potential", o.seed));
    return;
  }
  const KernelKind kind = o.inject.ula_for_invariance ? KernelKind::ULA : KernelKind::MALA;
  for (std::size_t i = 0; i < o.invariance_gammas.size(); ++i) {
    const double g = o.invariance_gammas[i];
    guarded(rep, s, "stationary_moments", o.seed, [&] {
      return single(invariance_check(spec, kind, g, o.invariance_steps, mean, m2,
                                     o.invariance_n_se, o.seed + i));
    });
  }
}

void suite_envelope(VerificationReport& rep, const PotentialSpec& spec,
                    const std::optional<AssumptionParams>& a3, const VerifyOptions& o) {
  const std::string s = "envelope";
  if (!a3 || !is_standard_gaussian(spec)) {
    rep.add(skipped(s, "certificate_envelope", "block laws are known in closed form only for the standard gaussian", o.seed));
    return;
  }
  guarded(rep, s, "certificate_envelope", o.seed, [&] {
    const int d = spec.dim;
    Certificate cert = certify(*a3, d);
    cert.log_C += o.inject.envelope_log_C_shift;
    const std::vector<TestFunction> fns = default_test_functions(spec, cert.eta);
    const Vec x0 = e1(d, o.envelope_x0);
    NoiseStream rng(o.seed, 0x656e766cull);
    MarginTracker mt;
    Vec z(d);
    for (int n = 0; n <= o.envelope_blocks; ++n) {
      // law after n blocks of ceil(1/gamma) steps as gamma -> 0: N(e^{-n} x0, (1 - e^{-2n}) I)
      const double a = std::exp(-static_cast<double>(n));
      const double sd = std::sqrt(-std::expm1(-2.0 * n));
      std::vector<double> s1(fns.size(), 0.0), s2(fns.size(), 0.0);
      for (long long c = 0; c < o.envelope_chains; ++c) {
        rng.fill_normal(z);
        const Vec x = a * x0 + sd * z;
        for (std::size_t j = 0; j < fns.size(); ++j) {
          const double v = fns[j].f(x);
          s1[j] += v;
          s2[j] += v * v;
        }
      }
      const double bound = bound_at_blocks(cert, x0, n);
      const double nn = static_cast<double>(o.envelope_chains);
      for (std::size_t j = 0; j < fns.size(); ++j) {
        const double mu = s1[j] / nn;
        const double se = std::sqrt(std::max(s2[j] / nn - mu * mu, 0.0) / nn);
        const double gap = std::abs(mu - fns[j].pi_f) + o.n_se * se;
        mt.observe(std::log(gap), bound, {{static_cast<double>(n), static_cast<double>(j), gap, bound}});
      }
    }
    Check c = mt.to_check(s, "certificate_envelope (log|E f(X_n) - pi f| <= bound_at)", o.seed, 0.0,
                          "Gamma_bar = exp(" + std::to_string(cert.log_Gamma_bar) +
                              "); block laws taken at the small-stepsize diffusion limit");
    c.n_samples = o.envelope_chains * (o.envelope_blocks + 1);
    return single(c);
  });
}

VerificationReport run_all(const PotentialSpec& spec, const std::optional<AssumptionParams>& a3,
                           const std::optional<BetaParams>& beta, double L,
                           std::optional<double> M, const VerifyOptions& o) {
  for (const std::string& s : o.suites)
    if (std::find(all_suites().begin(), all_suites().end(), s) == all_suites().end())
      throw ConfigError("unknown suite: " + s);
  VerificationReport rep;
  for (const std::string& s : all_suites()) {
    if (!selected(o, s)) {
      rep.add(skipped(s, s, "suite not selected", o.seed));
      continue;
    }
    if (s == "probe") suite_probe(rep, spec, a3, beta, L, o);
    else if (s == "growth") suite_growth(rep, spec, a3, beta, L, o);
    else if (s == "tau") suite_tau(rep, spec, a3, o);
    else if (s == "drift") suite_drift(rep, spec, a3, beta, L, M, o);
    else if (s == "tail") suite_tail(rep, spec, a3, L, o);
    else if (s == "minorization") suite_minorization(rep, spec, a3, L, o);
    else if (s == "reversibility") suite_reversibility(rep, spec, o);
    else if (s == "invariance") suite_invariance(rep, spec, o);
    else if (s == "envelope") suite_envelope(rep, spec, a3, o);
  }
  return rep;
}

}  // namespace

const std::vector<std::string>& all_suites() {
  static const std::vector<std::string> s{"probe", "growth", "tau", "drift", "tail",
                                          "minorization", "reversibility", "invariance", "envelope"};
  return s;
}

VerificationReport verify_all(const PotentialSpec& spec, const AssumptionParams& params,
                              const VerifyOptions& o, const std::optional<BetaParams>& beta) {
  return run_all(spec, params, beta, params.L, params.M, o);
}

VerificationReport verify_all_beta(const PotentialSpec& spec, const BetaParams& beta, double L,
                                   std::optional<double> M, const VerifyOptions& o) {
  return run_all(spec, std::nullopt, beta, L, M, o);
}

double verify_reversibility_1d(const PotentialSpec& spec, double gamma, double half_width,
                               int n_grid, bool metropolis) {
  if (spec.dim != 1) throw DimensionError("verify_reversibility_1d needs d = 1");
  if (!(gamma > 0.0)) throw DomainError("gamma must be positive");
  if (n_grid < 2) throw InvalidParamError("n_grid must be >= 2");
  std::vector<double> xs(n_grid), lpi(n_grid);
  for (int i = 0; i < n_grid; ++i) {
    xs[i] = -half_width + 2.0 * half_width * i / (n_grid - 1);
    lpi[i] = -spec.value(Vec::Constant(1, xs[i]));
  }
  // normalize by the trapezoid rule on the grid
  const double h = 2.0 * half_width / (n_grid - 1);
  std::vector<double> terms(lpi);
  terms.front() -= std::log(2.0);
  terms.back() -= std::log(2.0);
  const double log_z = logsumexp(terms) + std::log(h);
  const double s = std::sqrt(2.0 * gamma);
  // log of pi(x) q(x, y) for x != y
  auto log_flux = [&](int i, int j) {
    const Vec x = Vec::Constant(1, xs[i]);
    const Vec y = Vec::Constant(1, xs[j]);
    double l = lpi[i] - log_z + proposal_log_density(spec, x, y, gamma);
    if (metropolis) {
      const Vec z = (y - x + gamma * spec.gradient(x)) / s;
      l += -std::max(0.0, tau_direct(spec, x, z, gamma));
    }
    return l;
  };
  std::vector<double> worst(n_grid, 0.0);
  parallel_for(static_cast<std::size_t>(n_grid), [&](std::size_t ii) {
    const int i = static_cast<int>(ii);
    double w = 0.0;
    for (int j = i + 1; j < n_grid; ++j)
      w = std::max(w, std::abs(std::exp(log_flux(i, j)) - std::exp(log_flux(j, i))));
    worst[ii] = w;
  });
  return *std::max_element(worst.begin(), worst.end());
}

std::vector<TestFunction> default_test_functions(const PotentialSpec& spec, double eta) {
  const int d = spec.dim;
  const double C = std::log(kClipV);
  std::vector<TestFunction> fns{
      {"x_0", [](const Vec& x) { return x(0); }, 0.0},
      {"x_0^2", [](const Vec& x) { return x(0) * x(0); }, 1.0},
      {"clipped_log_V", [eta, C](const Vec& x) { return std::min(eta * x.squaredNorm(), C); }, 0.0},
      {"clipped_V", [eta, C](const Vec& x) { return std::exp(std::min(eta * x.squaredNorm(), C)); }, 0.0}};
  if (is_standard_gaussian(spec)) {
    fns[2].pi_f = gaussian_clipped_log_v(eta, d, C);
    fns[3].pi_f = gaussian_clipped_v(eta, d, kClipV);
  } else if (d == 1) {
    const Quadrature1d q = quadrature_1d(spec);
    for (auto& f : fns) f.pi_f = quad_expect(q, f.f);
  } else {
    throw DomainError("no reference expectations for this potential in d > 1");
  }
  return fns;
}

RateEstimate estimate_rate(const PotentialSpec& spec, double gamma, const Vec& x0,
                           long long n_chains, long long horizon, std::uint64_t seed,
                           const std::vector<TestFunction>& fns) {
  if (n_chains < 2) throw InvalidParamError("estimate_rate needs at least two chains");
  if (horizon < 10 * static_cast<long long>(std::ceil(1.0 / gamma)))
    throw InvalidParamError("estimate_rate needs a horizon of at least 10 blocks");
  const std::size_t nf = fns.size();
  const auto H = static_cast<std::size_t>(horizon) + 1;
  const std::size_t parts = kMcPartitions;
  std::vector<std::vector<double>> s1(parts, std::vector<double>(nf * H, 0.0));
  std::vector<std::vector<double>> s2 = s1;
  NoiseStream base(seed, 0x72617465ull);
  const auto n = static_cast<std::size_t>(n_chains);
  parallel_for(parts, [&](std::size_t w) {
    Vec z(spec.dim);
    for (std::size_t c = n * w / parts; c < n * (w + 1) / parts; ++c) {
      NoiseStream rng = base.substream(c);
      ChainState st{x0, 0, 0};
      for (std::size_t k = 0; k < H; ++k) {
        if (k > 0) {
          rng.fill_normal(z);
          st = mala_step(st, spec, gamma, z, rng.uniform()).state;
        }
        for (std::size_t j = 0; j < nf; ++j) {
          const double v = fns[j].f(st.x);
          s1[w][j * H + k] += v;
          s2[w][j * H + k] += v * v;
        }
      }
    }
  });
  RateEstimate est;
  est.gamma = gamma;
  est.n_chains = n_chains;
  const double nn = static_cast<double>(n_chains);
  for (std::size_t j = 0; j < nf; ++j) {
    RateEstimate::Series sr;
    sr.name = fns[j].name;
    sr.gap.resize(H);
    sr.se.resize(H);
    for (std::size_t k = 0; k < H; ++k) {
      double a = 0.0, b = 0.0;
      for (std::size_t w = 0; w < parts; ++w) {
        a += s1[w][j * H + k];
        b += s2[w][j * H + k];
      }
      const double mu = a / nn;
      sr.gap[k] = std::abs(mu - fns[j].pi_f);
      sr.se[k] = std::sqrt(std::max(b / nn - mu * mu, 0.0) / (nn - 1.0));
    }
    std::size_t end = H;
    for (std::size_t k = 0; k < H; ++k) {
      if (sr.gap[k] <= 2.0 * sr.se[k] || sr.gap[k] == 0.0) {
        end = k;
        break;
      }
    }
    sr.window_end = static_cast<long long>(end);
    if (end < 3) {
      sr.insufficient_signal = true;
    } else {
      // least squares of log gap on k
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      const double m = static_cast<double>(end);
      for (std::size_t k = 0; k < end; ++k) {
        const double y = std::log(sr.gap[k]);
        sx += k;
        sy += y;
        sxx += static_cast<double>(k) * k;
        sxy += k * y;
      }
      const double den = m * sxx - sx * sx;
      sr.slope = (m * sxy - sx * sy) / den;
      const double icpt = (sy - sr.slope * sx) / m;
      double rss = 0.0;
      for (std::size_t k = 0; k < end; ++k) {
        const double r = std::log(sr.gap[k]) - icpt - sr.slope * k;
        rss += r * r;
      }
      sr.slope_se = end > 2 ? std::sqrt(rss / (m - 2.0) * m / den) : 0.0;
    }
    est.series.push_back(std::move(sr));
  }
  return est;
}

Check invariance_check(const PotentialSpec& spec, KernelKind kind, double gamma,
                       long long n_steps, const Vec& pi_mean, const Mat& pi_m2, double n_se,
                       std::uint64_t seed) {
  const int d = spec.dim;
  NoiseStream rng(seed, 0x696e7661ull);
  ChainOptions co;
  co.keep_path = true;
  const Trajectory tr = run_chain(kind, spec, Vec::Zero(d), gamma, n_steps, rng, co);
  MarginTracker mt;
  std::vector<double> series(tr.positions.size());
  auto test = [&](double target, auto&& stat, double a, double b) {
    for (std::size_t t = 0; t < series.size(); ++t) series[t] = stat(tr.positions[t]);
    const MeanSe ms = batch_means(series);
    mt.observe(std::abs(ms.mean - target), n_se * ms.se, {{gamma, a, b, ms.mean, ms.se}});
  };
  for (int i = 0; i < d; ++i) test(pi_mean(i), [i](const Vec& x) { return x(i); }, i, -1);
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j)
      test(pi_m2(i, j), [i, j](const Vec& x) { return x(i) * x(j); }, i, j);
  Check c = mt.to_check("invariance",
                        std::string("stationary_moments (") + to_string(kind) + ", gamma=" +
                            std::to_string(gamma) + ", d=" + std::to_string(d) + ")",
                        seed);
  c.n_samples = n_steps;
  return c;
}

}  // namespace malacert
