/**
 * Copyright The malacert Authors.
 * SPDX-License-Identifier: Apache-2.0
 */
#include "malacert/potential.hpp"

#include "malacert/errors.hpp"
#include "malacert/rng.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace malacert {

namespace {

std::vector<double> to_std(const Vec& v) { return {v.data(), v.data() + v.size()}; }

double param_or(const ParamMap& p, const std::string& key, double fallback) {
  auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

void check_finite(const Vec& v, const char* what) {
  if (!v.allFinite()) throw NonFiniteError(std::string("non-finite ") + what);
}

// Point uniformly distributed in the shell inner < |x| <= outer.
Vec sample_shell(NoiseStream& rng, int d, double inner, double outer) {
  Vec dir = rng.normal_vector(d);
  dir /= dir.norm();
  const double kappa = std::pow(inner / outer, d);
  const double r = outer * std::pow(kappa + rng.uniform() * (1.0 - kappa), 1.0 / d);
  return r * dir;
}

}  // namespace

PotentialSpec PotentialSpec::make(std::string name, int dim,
                                  std::function<double(const Vec&)> value,
                                  std::function<Vec(const Vec&)> gradient,
                                  std::function<Mat(const Vec&)> hessian) {
  if (dim <= 0) throw InvalidParamError("dimension must be positive");
  if (!value || !gradient) throw InvalidParamError("value and gradient callbacks are required");
  PotentialSpec s{std::move(name), dim, std::move(value), std::move(gradient), std::move(hessian)};
  const Vec g0 = s.gradient(Vec::Zero(dim));
  if (g0.size() != dim) throw DimensionError("gradient has wrong length");
  if (!g0.allFinite() || g0.lpNorm<Eigen::Infinity>() > 1e-10) {
    std::ostringstream os;
    os << "potential '" << s.name << "' violates grad U(0) = 0 (|grad U(0)|_inf = "
       << g0.lpNorm<Eigen::Infinity>() << ")";
    throw InvalidParamError(os.str());
  }
  return s;
}

Mat PotentialSpec::hess(const Vec& x) const {
  if (hessian) return hessian(x);
  return finite_difference_hessian(*this, x);
}

Mat finite_difference_hessian(const PotentialSpec& spec, const Vec& x) {
  const int d = spec.dim;
  const double h = std::cbrt(std::numeric_limits<double>::epsilon()) * (1.0 + x.norm());
  Mat H(d, d);
  Vec xp = x, xm = x;
  for (int j = 0; j < d; ++j) {
    xp[j] = x[j] + h;
    xm[j] = x[j] - h;
    H.col(j) = (spec.gradient(xp) - spec.gradient(xm)) / (2.0 * h);
    xp[j] = xm[j] = x[j];
  }
  return 0.5 * (H + H.transpose());
}

Evaluation evaluate(const PotentialSpec& spec, const Vec& x) {
  if (x.size() != spec.dim) throw DimensionError("evaluate: length(x) != d");
  check_finite(x, "input");
  Evaluation e{spec.value(x), spec.gradient(x), spec.hess(x)};
  if (!std::isfinite(e.U)) throw NonFiniteError("non-finite potential value");
  check_finite(e.grad, "gradient");
  if (!e.hess.allFinite()) throw NonFiniteError("non-finite Hessian");
  return e;
}

void AssumptionParams::validate() const {
  if (!(L > 0.0) || !std::isfinite(L)) throw InvalidParamError("L must be positive");
  if (!(m > 0.0) || !std::isfinite(m)) throw InvalidParamError("m must be positive");
  if (m > L) throw InvalidParamError("m must not exceed L");
  if (!(K >= 0.0) || !std::isfinite(K)) throw InvalidParamError("K must be nonnegative");
  if (M && !(*M >= 0.0)) throw InvalidParamError("M must be nonnegative");
}

double AssumptionParams::require_M() const {
  if (!M) throw AssumptionError("third-derivative bound M is required for quantitative certificates");
  return *M;
}

void BetaParams::validate() const {
  if (!(beta >= 0.0 && beta < 1.0)) throw InvalidParamError("beta must lie in [0, 1)");
  if (!(m_beta > 0.0)) throw InvalidParamError("m_beta must be positive");
  if (!(L_beta >= m_beta)) throw InvalidParamError("L_beta must be >= m_beta");
  if (!(K_beta >= 0.0)) throw InvalidParamError("K_beta must be nonnegative");
}

BuiltinPotential builtin(const std::string& kind, int d, const ParamMap& params) {
  if (d <= 0) throw InvalidParamError("dimension must be positive");
  if (kind == "gaussian") {
    auto spec = PotentialSpec::make(
        "gaussian", d, [](const Vec& x) { return 0.5 * x.squaredNorm(); },
        [](const Vec& x) -> Vec { return x; },
        [d](const Vec&) -> Mat { return Mat::Identity(d, d); });
    return {spec, AssumptionParams{1.0, 0.0, 1.0, 0.0}, std::nullopt, 1.0, 0.0};
  }
  if (kind == "anisotropic_gaussian") {
    const double lo = param_or(params, "lo", 0.5);
    const double hi = param_or(params, "hi", 2.0);
    if (!(lo > 0.0 && hi >= lo)) throw InvalidParamError("anisotropic_gaussian needs 0 < lo <= hi");
    Vec lam(d);
    for (int i = 0; i < d; ++i)
      lam[i] = d == 1 ? lo : lo * std::pow(hi / lo, static_cast<double>(i) / (d - 1));
    auto spec = PotentialSpec::make(
        "anisotropic_gaussian", d,
        [lam](const Vec& x) { return 0.5 * x.dot(lam.cwiseProduct(x)); },
        [lam](const Vec& x) -> Vec { return lam.cwiseProduct(x); },
        [lam](const Vec&) -> Mat { return lam.asDiagonal(); });
    const double L = lam.maxCoeff();
    return {spec, AssumptionParams{L, 0.0, lam.minCoeff(), 0.0}, std::nullopt, L, 0.0};
  }
  if (kind == "bump") {
    const double a = param_or(params, "a", 0.1);
    const double w = param_or(params, "w", 1.0);
    if (!(a >= 0.0) || !(w > 0.0)) throw InvalidParamError("bump needs a >= 0 and w > 0");
    if (a * w * w >= 1.0)
      throw InvalidParamError(
          "bump with a*w^2 >= 1 has curvature 1 - a*w^2 <= 0 on a periodic set reaching "
          "infinity, so no (m > 0, K) exists");
    auto spec = PotentialSpec::make(
        "bump", d,
        [a, w](const Vec& x) { return 0.5 * x.squaredNorm() + a * (w * x).array().cos().sum(); },
        [a, w](const Vec& x) -> Vec { return x - (a * w) * (w * x).array().sin().matrix(); },
        [a, w](const Vec& x) -> Mat {
          Vec diag = (1.0 - a * w * w * (w * x).array().cos()).matrix();
          return diag.asDiagonal();
        });
    const double L = 1.0 + a * w * w;
    const double M = a * w * w * w;
    return {spec, AssumptionParams{L, M, 1.0 - a * w * w, 0.0}, std::nullopt, L, M};
  }
  if (kind == "gauss_bump") {
    const double a = param_or(params, "a", 2.0);
    const double s = param_or(params, "s", 1.0);
    const double m = param_or(params, "m", 0.5);
    if (!(a >= 0.0) || !(s > 0.0) || !(m > 0.0 && m < 1.0))
      throw InvalidParamError("gauss_bump needs a >= 0, s > 0, 0 < m < 1");
    const double c = a / (s * s);
    const double s2 = s * s;
    auto spec = PotentialSpec::make(
        "gauss_bump", d,
        [a, s2](const Vec& x) { return 0.5 * x.squaredNorm() + a * std::exp(-x.squaredNorm() / (2 * s2)); },
        [c, s2](const Vec& x) -> Vec { return (1.0 - c * std::exp(-x.squaredNorm() / (2 * s2))) * x; },
        [c, s2, d](const Vec& x) -> Mat {
          const double e = std::exp(-x.squaredNorm() / (2 * s2));
          Mat H = (1.0 - c * e) * Mat::Identity(d, d);
          H.noalias() += (c * e / s2) * x * x.transpose();
          return H;
        });
    // eigenvalues: tangential 1 - c e^{-u}, radial 1 + c e^{-u}(2u - 1), u = |x|^2 / (2 s^2)
    const double L = std::max(1.0 + 2.0 * c * std::exp(-1.5), c - 1.0);
    const double K = c > 1.0 - m ? s * std::sqrt(2.0 * std::log(c / (1.0 - m))) : 0.0;
    // symmetric trilinear norm of D^3 of a e^{-|x|^2/2s^2}: (a/s^3) max_t e^{-t^2/2}|3t - t^3|
    double h = 0.0;
    for (int i = 0; i <= 200000; ++i) {
      const double t = 6.0 * i / 200000.0;
      h = std::max(h, std::exp(-0.5 * t * t) * std::abs(3.0 * t - t * t * t));
    }
    const double M = (a / (s2 * s)) * h * (1.0 + 1e-9);
    return {spec, AssumptionParams{L, M, m, K}, std::nullopt, L, M};
  }
  if (kind == "beta_tail") {
    const double beta = param_or(params, "beta", 0.5);
    if (!(beta >= 0.0 && beta < 1.0)) throw InvalidParamError("beta_tail needs beta in [0, 1)");
    const double p = (2.0 - beta) / 2.0;
    auto spec = PotentialSpec::make(
        "beta_tail", d,
        [p](const Vec& x) { return std::pow(1.0 + x.squaredNorm(), p) / (2.0 * p); },
        [p](const Vec& x) -> Vec { return std::pow(1.0 + x.squaredNorm(), p - 1.0) * x; },
        [p, d](const Vec& x) -> Mat {
          const double q = 1.0 + x.squaredNorm();
          Mat H = std::pow(q, p - 1.0) * Mat::Identity(d, d);
          H.noalias() += (2.0 * (p - 1.0) * std::pow(q, p - 2.0)) * x * x.transpose();
          return H;
        });
    BetaParams bp = estimate_beta_params(spec, beta, param_or(params, "probe_radius", 1e6));
    const double M = 1.05 * estimate_third_derivative_bound(spec, 20.0, 4000, 0x5eedull);
    // both Hessian eigenvalues are <= 1 with equality at the origin
    return {spec, std::nullopt, bp, 1.0, M};
  }
  throw UnknownKindError("unknown potential kind '" + kind + "'");
}

VerificationReport probe_assumptions(const PotentialSpec& spec, const AssumptionParams& params,
                                     long long n, double radius, std::uint64_t seed) {
  if (n < 1) throw InvalidParamError("probe needs n >= 1");
  if (!(radius > params.K)) throw DegenerateShellError("probe radius must exceed K");
  NoiseStream rng(seed, 0x70726f6265ull);
  MarginTracker curv, norm;
  for (long long i = 0; i < n; ++i) {
    const Vec x = sample_shell(rng, spec.dim, params.K, radius);
    Eigen::SelfAdjointEigenSolver<Mat> es(spec.hess(x));
    const Vec& ev = es.eigenvalues();
    curv.observe_lazy(params.m, ev[0], [&] {
      return std::vector<std::vector<double>>{to_std(x), to_std(es.eigenvectors().col(0))};
    });
    const int top = std::abs(ev[0]) > std::abs(ev[ev.size() - 1]) ? 0 : static_cast<int>(ev.size()) - 1;
    norm.observe_lazy(std::abs(ev[top]), params.L, [&] {
      return std::vector<std::vector<double>>{to_std(x), to_std(es.eigenvectors().col(top))};
    });
  }
  VerificationReport r;
  r.add(curv.to_check("probe", "curvature_outside_ball >= m", seed, 1e-8));
  r.add(norm.to_check("probe", "hessian_norm <= L", seed, 1e-8));
  return r;
}

VerificationReport probe_assumptions(const PotentialSpec& spec, const BetaParams& params, double L,
                                     long long n, double radius, std::uint64_t seed) {
  if (n < 1) throw InvalidParamError("probe needs n >= 1");
  if (!(radius > params.K_beta)) throw DegenerateShellError("probe radius must exceed K_beta");
  NoiseStream rng(seed, 0x62657461ull);
  MarginTracker lower, upper, norm;
  for (long long i = 0; i < n; ++i) {
    const Vec x = sample_shell(rng, spec.dim, params.K_beta, radius);
    const double r = x.norm();
    Eigen::SelfAdjointEigenSolver<Mat> es(spec.hess(x));
    const Vec& ev = es.eigenvalues();
    const int top = static_cast<int>(ev.size()) - 1;
    auto wit = [&](int k) {
      return [&, k] {
        return std::vector<std::vector<double>>{to_std(x), to_std(es.eigenvectors().col(k))};
      };
    };
    lower.observe_lazy(params.m_beta, ev[0] * (1.0 + std::pow(r, params.beta)), wit(0));
    upper.observe_lazy(ev[top] * (1.0 + std::pow(r, 0.75 * params.beta)), params.L_beta, wit(top));
    norm.observe_lazy(std::max(std::abs(ev[0]), std::abs(ev[top])), L, wit(top));
  }
  VerificationReport rep;
  rep.add(lower.to_check("probe", "beta_curvature_lower >= m_beta", seed, 1e-8));
  rep.add(upper.to_check("probe", "beta_curvature_upper <= L_beta", seed, 1e-8));
  rep.add(norm.to_check("probe", "hessian_norm <= L", seed, 1e-8));
  return rep;
}

BetaParams estimate_beta_params(const PotentialSpec& spec, double beta, double r_max,
                                double safety) {
  const int n = 4000;
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  Vec e = Vec::Zero(spec.dim);
  e[0] = 1.0;
  for (int i = 0; i <= n; ++i) {
    // r = 0 followed by a log-spaced scan of [1e-3, r_max]
    const double r = i == 0 ? 0.0 : std::pow(10.0, -3.0 + (std::log10(r_max) + 3.0) * (i - 1) / (n - 1));
    Eigen::SelfAdjointEigenSolver<Mat> es(spec.hess(r * e), Eigen::EigenvaluesOnly);
    lo = std::min(lo, es.eigenvalues()[0] * (1.0 + std::pow(r, beta)));
    hi = std::max(hi, es.eigenvalues()[spec.dim - 1] * (1.0 + std::pow(r, 0.75 * beta)));
  }
  BetaParams p{beta, lo * (1.0 - safety), hi * (1.0 + safety), 0.0, true};
  p.validate();
  return p;
}

double estimate_third_derivative_bound(const PotentialSpec& spec, double r_max, long long n,
                                       std::uint64_t seed) {
  NoiseStream rng(seed, 0x64337535ull);
  const double h = 1e-4;
  double best = 0.0;
  for (long long i = 0; i < n; ++i) {
    const Vec x = sample_shell(rng, spec.dim, 0.0, r_max);
    for (int k = 0; k < 2; ++k) {
      Vec u = (k == 0 && x.norm() > 0) ? Vec(x / x.norm()) : rng.normal_vector(spec.dim);
      u /= u.norm();
      const Mat dH = (spec.hess(x + h * u) - spec.hess(x - h * u)) / (2.0 * h);
      Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (dH + dH.transpose()), Eigen::EigenvaluesOnly);
      best = std::max(best, es.eigenvalues().cwiseAbs().maxCoeff());
    }
  }
  return best;
}

double curvature_radius_bisection(const PotentialSpec& spec, double m, double r_max) {
  Vec e = Vec::Constant(spec.dim, 1.0 / std::sqrt(static_cast<double>(spec.dim)));
  auto deficit = [&](double r) {
    Eigen::SelfAdjointEigenSolver<Mat> es(spec.hess(r * e), Eigen::EigenvaluesOnly);
    return es.eigenvalues()[0] - m;
  };
  // outermost grid cell where the curvature deficit changes sign
  const int n = 20000;
  double last_bad = -1.0;
  for (int i = 0; i <= n; ++i) {
    const double r = r_max * i / n;
    if (deficit(r) < 0.0) last_bad = r;
  }
  if (last_bad < 0.0) return 0.0;
  if (last_bad >= r_max) throw DomainError("curvature deficit persists up to the scan radius");
  double a = last_bad, b = std::min(r_max, last_bad + r_max / n);
  for (int it = 0; it < 200 && b - a > 1e-14 * (1.0 + b); ++it) {
    const double mid = 0.5 * (a + b);
    (deficit(mid) < 0.0 ? a : b) = mid;
  }
  return b;
}

}  // namespace malacert
