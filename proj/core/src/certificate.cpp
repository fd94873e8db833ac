/**
 * Copyright The malacert Authors.
 * SPDX-License-Identifier: Apache-2.0
 */
#include "malacert/certificate.hpp"

#include "malacert/drift.hpp"
#include "malacert/errors.hpp"
#include "malacert/logmath.hpp"
#include "malacert/minorization.hpp"
#include "malacert/ratio.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

namespace malacert {

namespace {

constexpr int kAbarGrid = 32;

// -log(1 - e^{log_p}) given log p, staying accurate when p underflows.
double log_neg_log1m(double log_p) {
  const double p = std::exp(log_p);
  if (p < 1e-12) return log_p + 0.5 * p;  // -log(1-p) = p(1 + p/2 + ...)
  return std::log(-std::log1p(-p));
}

struct RateParts {
  double log_b_bar;
  double log_neg_log_rho;
  double log_C;
};

// Shared tail of both regimes: lambda, b, M, eps -> rho, C.
RateParts rate_chain(double log_lambda, double log_b, double log_M, double log_eps) {
  RateParts r;
  r.log_b_bar = logaddexp(log_lambda + log_b, log_M);
  const double log_half_eps = log_eps - std::numbers::ln2;
  const double log_a = log_neg_log1m(log_half_eps);
  // (1 - lambda)/2 in log form
  const double log_half_gap = log1mexp(log_lambda) - std::numbers::ln2;
  const double log_c = log_neg_log1m(log_half_gap);
  const double a = std::exp(log_a), c = std::exp(log_c);
  r.log_neg_log_rho = log_a + log_c - std::log(a + c + r.log_b_bar);
  const double log1m_half_eps = log1m_from_log(log_half_eps);
  r.log_C = std::exp(r.log_neg_log_rho) + std::log1p(std::exp(log_lambda)) +
            logaddexp(0.0, r.log_b_bar - log1m_half_eps - log_half_gap);
  return r;
}

double log_M_of(double log_b, double log_gb, double log_lambda) {
  return std::max(std::log(4.0) + log_b + std::log1p(std::exp(log_gb)) - log1mexp(log_lambda), 0.0);
}

double resolve_gamma_bar(std::optional<double> gamma_bar, double log_Gbar) {
  if (!gamma_bar) return log_Gbar;
  if (!(*gamma_bar > 0.0)) throw DomainError("gamma_bar must be positive");
  const double lg = std::log(*gamma_bar);
  if (lg > log_Gbar + 1e-13 * std::abs(log_Gbar))
    throw DomainError("gamma_bar exceeds the certified radius Gamma_bar = min(Gamma, Gamma_tilde_K) "
                      "(log Gamma_bar = " + std::to_string(log_Gbar) + ")");
  return std::min(lg, log_Gbar);
}

// Log-spaced grid over (0, Gamma] always containing log_gb.
double grid_min(double log_Gamma, double log_gb, const std::function<double(double)>& f) {
  const double lo = std::min(log_gb, log_Gamma - 30.0);
  double best = f(log_gb);
  for (int j = 0; j < kAbarGrid; ++j) {
    const double lg = log_Gamma + (lo - log_Gamma) * j / (kAbarGrid - 1);
    best = std::min(best, f(lg));
  }
  return best;
}

void finish(Certificate& c, double log_eps) {
  c.log_epsilon = log_eps;
  const RateParts r = rate_chain(c.log_lambda, c.log_b, c.log_M, log_eps);
  c.log_b_bar = r.log_b_bar;
  c.log_neg_log_rho = r.log_neg_log_rho;
  c.log_rho = -std::exp(r.log_neg_log_rho);
  c.log_C = r.log_C;
  c.Gamma_bar = clamp_radius(c.log_Gamma_bar);
  c.gamma_bar = clamp_radius(c.log_gamma_bar);
}

}  // namespace

std::string to_string(Regime r) { return r == Regime::A3 ? "A3" : "A4beta"; }

double Certificate::log_lyapunov(const Vec& x) const {
  return regime == Regime::A3 ? log_V(eta, x) : log_W(eta, x);
}

Certificate certify(const AssumptionParams& p, int d, const Upsilons& u,
                    std::optional<double> gamma_bar) {
  p.validate();
  p.require_M();
  const DriftConstants dc = mala_drift_constants(p, d, u.upsilon);
  Certificate c;
  c.regime = Regime::A3;
  c.eta = dc.eta_bar;
  c.varpi = dc.varpi;
  c.log_lambda = -dc.varpi;
  const double log_Gamma = std::log(dc.Gamma);
  const double log_M_G = log_M_of(dc.log_b_M, log_Gamma, c.log_lambda);
  const double K_G = std::sqrt(log_M_G / c.eta);
  const double log_gt = log_gamma_tilde_K(K_G, p, d, u.upsilon_tilde);
  c.log_Gamma_bar = std::min(log_Gamma, log_gt);
  c.log_gamma_bar = resolve_gamma_bar(gamma_bar, c.log_Gamma_bar);
  c.log_b = mala_log_b_M(dc, p, d, c.log_gamma_bar);
  c.log_M = log_M_of(c.log_b, c.log_gamma_bar, c.log_lambda);
  c.K_gamma_bar = std::sqrt(c.log_M / c.eta);
  finish(c, log_epsilon_of_K(c.K_gamma_bar, p.L));
  c.log_A_bar = c.log_b - std::log(c.varpi);
  c.log_A_bar_grid = grid_min(log_Gamma, c.log_gamma_bar, [&](double lg) {
    return mala_log_b_M(dc, p, d, lg) - std::log(c.varpi);
  });

  const MinorizationConstants mc = minorization_constants(c.K_gamma_bar, p, d, u.upsilon_tilde, u.upsilon_hat);
  c.provenance = {
      {"inputs", {{"L", p.L}, {"M", *p.M}, {"m", p.m}, {"K", p.K}, {"d", d},
                  {"upsilon", u.upsilon}, {"upsilon_tilde", u.upsilon_tilde}}},
      {"drift", {{"eta_bar", dc.eta_bar}, {"K_tilde", dc.K_tilde}, {"K_U", dc.K_U},
                 {"Gamma_half", dc.Gamma_half}, {"C2_Gamma_half", dc.C2_Gamma_half},
                 {"b_half", dc.b_half}, {"K_half", dc.K_half}, {"K_M", dc.K_M},
                 {"Gamma", dc.Gamma}, {"varpi", dc.varpi}, {"log_b_U_at_Gamma", dc.log_b_U},
                 {"log_b_M_at_Gamma", dc.log_b_M}, {"log_b_U", ula_log_b_U(p, d, c.gamma_bar)},
                 {"log_b_M", c.log_b}}},
      {"radius", {{"log_M_Gamma", log_M_G}, {"K_Gamma", K_G}, {"log_Gamma_tilde_K_Gamma", log_gt}}},
      {"minorization", {{"K", mc.K}, {"epsilon_K", mc.epsilon_K}, {"log_epsilon_K", mc.log_epsilon_K},
                        {"b_tilde_U", mc.b_tilde_U}, {"Gamma_tilde_half", mc.Gamma_tilde_half},
                        {"Gamma_tilde_K", mc.Gamma_tilde_K}, {"log_Gamma_tilde_K", mc.log_Gamma_tilde_K},
                        {"Gamma_hat_K", mc.Gamma_hat_K}, {"log_Gamma_hat_K", mc.log_Gamma_hat_K}}},
      {"rate", {{"log_b_bar", c.log_b_bar}, {"log_neg_log_rho", c.log_neg_log_rho},
                {"log_A_bar_grid", c.log_A_bar_grid}}},
      {"notes", {"M_gamma_bar = max(4 b (1 + gamma_bar)/(1 - lambda), 1); b_bar = lambda b + M_gamma_bar",
                 "an alternative threshold for M is not used"}}};
  return c;
}

Certificate certify_beta(const BetaParams& p, double L, double M, int d, const Upsilons& u,
                         std::optional<double> gamma_bar) {
  p.validate();
  const BetaDriftConstants dc = mala_beta_drift_constants(p, L, M, d, u.upsilon_beta);
  Certificate c;
  c.regime = Regime::A4beta;
  c.eta = dc.eta_beta;
  c.varpi = dc.varpi_beta;
  c.log_lambda = -dc.varpi_beta;
  // sublevel radius of W: eta sqrt(1 + K^2) = log M
  auto radius = [&](double log_M) {
    const double ell = log_M / c.eta;
    return std::sqrt(std::max(ell * ell - 1.0, 0.0));
  };
  const double log_Gamma = std::log(dc.Gamma_beta);
  const double log_M_G = log_M_of(dc.log_b_M_beta, log_Gamma, c.log_lambda);
  const double K_G = radius(log_M_G);
  const double log_gh = log_gamma_hat_K(K_G, L, M, d, u.upsilon_hat);
  c.log_Gamma_bar = std::min(log_Gamma, log_gh);
  c.log_gamma_bar = resolve_gamma_bar(gamma_bar, c.log_Gamma_bar);
  c.log_b = mala_beta_log_b(dc, p, L, M, d, c.log_gamma_bar);
  c.log_M = log_M_of(c.log_b, c.log_gamma_bar, c.log_lambda);
  c.K_gamma_bar = radius(c.log_M);
  finish(c, log_epsilon_of_K(c.K_gamma_bar, L));
  c.log_A_bar = c.log_b - std::log(c.varpi);
  c.log_A_bar_grid = grid_min(log_Gamma, c.log_gamma_bar, [&](double lg) {
    return mala_beta_log_b(dc, p, L, M, d, lg) - std::log(c.varpi);
  });

  const double log_eps = c.log_epsilon;
  c.provenance = {
      {"inputs", {{"beta", p.beta}, {"m_beta", p.m_beta}, {"L_beta", p.L_beta}, {"K_beta", p.K_beta},
                  {"L", L}, {"M", M}, {"d", d}, {"upsilon_beta", u.upsilon_beta},
                  {"upsilon_hat", u.upsilon_hat}}},
      {"drift", {{"eta_beta", dc.eta_beta}, {"K_tilde_beta", dc.K_tilde_beta},
                 {"K_bar_beta", dc.K_bar_beta}, {"K_ray_beta", dc.K_beta_ray},
                 {"Gamma_half_beta", dc.Gamma_half_beta}, {"C2_beta_Gamma_half", dc.C2_beta_Gamma_half},
                 {"b_half_beta", dc.b_half_beta}, {"K_half", dc.K_half}, {"K_tilde_ray", dc.K_tilde_ray},
                 {"Gamma_beta", dc.Gamma_beta}, {"varpi_beta", dc.varpi_beta},
                 {"log_b_beta_at_Gamma", dc.log_b_beta}, {"log_b_M_at_Gamma", dc.log_b_M_beta},
                 {"log_b_M", c.log_b}}},
      {"radius", {{"log_M_Gamma", log_M_G}, {"K_Gamma", K_G}, {"log_Gamma_hat_K_Gamma", log_gh}}},
      {"minorization", {{"K", c.K_gamma_bar}, {"log_epsilon_K", log_eps},
                        {"epsilon_K", std::exp(log_eps)},
                        {"Gamma_hat_half", std::min(u.upsilon_hat, 1.0 / L)},
                        {"log_Gamma_hat_K", log_gamma_hat_K(c.K_gamma_bar, L, M, d, u.upsilon_hat)}}},
      {"rate", {{"log_b_bar", c.log_b_bar}, {"log_neg_log_rho", c.log_neg_log_rho},
                {"log_A_bar_grid", c.log_A_bar_grid}}},
      {"notes", {"K_gamma_bar is the radius of {W <= M}: sqrt((log M / eta)^2 - 1)",
                 "b^(beta) drops the stray gamma factor on the middle term"}}};
  return c;
}

double bound_at_blocks(const Certificate& c, const Vec& x, double n_blocks) {
  if (!(n_blocks >= 0.0)) throw DomainError("block count must be nonnegative");
  const double decay = n_blocks == 0.0 ? 0.0 : -n_blocks * std::exp(c.log_neg_log_rho);
  return c.log_C + decay + logaddexp(c.log_lyapunov(x), std::min(c.log_A_bar, c.log_A_bar_grid));
}

double bound_at(const Certificate& c, const Vec& x, long long k, double gamma) {
  if (!(gamma > 0.0)) throw DomainError("bound_at needs gamma > 0");
  if (std::log(gamma) > c.log_Gamma_bar + 1e-13 * std::abs(c.log_Gamma_bar))
    throw DomainError("bound_at needs gamma <= Gamma_bar");
  if (k < 0) throw DomainError("bound_at needs k >= 0");
  const double block = std::ceil(1.0 / gamma);
  return bound_at_blocks(c, x, std::floor(static_cast<double>(k) / block));
}

nlohmann::json to_json(const Certificate& c) {
  return {{"regime", to_string(c.regime)},
          {"eta", c.eta},
          {"varpi", c.varpi},
          {"log_lambda", c.log_lambda},
          {"log_b", c.log_b},
          {"log_M", c.log_M},
          {"K_gamma_bar", c.K_gamma_bar},
          {"log_epsilon", c.log_epsilon},
          {"log_b_bar", c.log_b_bar},
          {"log_rho", c.log_rho},
          {"log_neg_log_rho", c.log_neg_log_rho},
          {"log_C", c.log_C},
          {"log_A_bar", c.log_A_bar},
          {"log_A_bar_grid", c.log_A_bar_grid},
          {"Gamma_bar", c.Gamma_bar},
          {"log_Gamma_bar", c.log_Gamma_bar},
          {"gamma_bar", c.gamma_bar},
          {"log_gamma_bar", c.log_gamma_bar},
          {"provenance", c.provenance}};
}

Certificate certificate_from_json(const nlohmann::json& j) {
  Certificate c;
  const std::string r = j.at("regime").get<std::string>();
  if (r == "A3") c.regime = Regime::A3;
  else if (r == "A4beta") c.regime = Regime::A4beta;
  else throw ConfigError("unknown certificate regime: " + r);
  j.at("eta").get_to(c.eta);
  j.at("varpi").get_to(c.varpi);
  j.at("log_lambda").get_to(c.log_lambda);
  j.at("log_b").get_to(c.log_b);
  j.at("log_M").get_to(c.log_M);
  j.at("K_gamma_bar").get_to(c.K_gamma_bar);
  j.at("log_epsilon").get_to(c.log_epsilon);
  j.at("log_b_bar").get_to(c.log_b_bar);
  j.at("log_rho").get_to(c.log_rho);
  j.at("log_neg_log_rho").get_to(c.log_neg_log_rho);
  j.at("log_C").get_to(c.log_C);
  j.at("log_A_bar").get_to(c.log_A_bar);
  j.at("log_A_bar_grid").get_to(c.log_A_bar_grid);
  j.at("Gamma_bar").get_to(c.Gamma_bar);
  j.at("log_Gamma_bar").get_to(c.log_Gamma_bar);
  j.at("gamma_bar").get_to(c.gamma_bar);
  j.at("log_gamma_bar").get_to(c.log_gamma_bar);
  c.provenance = j.value("provenance", nlohmann::json::object());
  return c;
}

}  // namespace malacert
