/**
 * Copyright The malacert Authors.
 * SPDX-License-Identifier: Apache-2.0
 */
#include "malacert/certificate.hpp"
#include "malacert/errors.hpp"
#include "malacert/minorization.hpp"
#include "malacert/ratio.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>

namespace malacert {
namespace {

nlohmann::json load_fixture(const std::string& name) {
  std::ifstream in(std::string(MALACERT_FIXTURE_DIR) + "/" + name);
  EXPECT_TRUE(in) << name;
  return nlohmann::json::parse(in);
}

// Looks a golden key up in the certificate, then in each provenance section.
std::optional<double> lookup(const nlohmann::json& cj, const std::string& key) {
  static const std::map<std::string, std::string> alias = {{"log_b_M", "log_b"}};
  const auto it = alias.find(key);
  const std::string k = it == alias.end() ? key : it->second;
  if (cj.contains(k) && cj[k].is_number()) return cj[k].get<double>();
  for (const char* sec : {"drift", "radius", "minorization", "rate"}) {
    const auto& s = cj["provenance"][sec];
    if (s.contains(key) && s[key].is_number()) return s[key].get<double>();
  }
  return std::nullopt;
}

void expect_rel(double got, double want, const std::string& key) {
  const double tol = 1e-12 * std::max(std::abs(want), 1e-300);
  if (want == 0.0)
    EXPECT_EQ(got, 0.0) << key;
  else
    EXPECT_NEAR(got, want, tol) << key;
}

TEST(Certificate, GaussianMatchesGolden) {
  const nlohmann::json g = load_fixture("gaussian_d1.golden.json");
  AssumptionParams p;
  p.L = g["inputs"]["L"];
  p.M = g["inputs"]["M"].get<double>();
  p.m = g["inputs"]["m"];
  p.K = g["inputs"]["K"];
  const int d = g["inputs"]["d"];
  const Certificate c = certify(p, d);
  const nlohmann::json cj = to_json(c);
  int checked = 0;
  for (const auto& [key, v] : g["values"].items()) {
    const double want = v.get<double>();
    double got;
    if (key == "C1_Gamma") {
      got = c1_bound(cj["provenance"]["drift"]["Gamma"], p.L, *p.M);
    } else if (key == "log_gamma_tilde_K4") {
      got = log_gamma_tilde_K(4.0, p, d);
    } else {
      const auto o = lookup(cj, key);
      ASSERT_TRUE(o) << "missing " << key;
      got = *o;
    }
    expect_rel(got, want, key);
    ++checked;
  }
  EXPECT_GE(checked, 25);
  EXPECT_EQ(c.regime, Regime::A3);
}

TEST(Certificate, BetaMatchesGolden) {
  const nlohmann::json g = load_fixture("beta_tail_b05_d2.golden.json");
  const auto& in = g["inputs"];
  BetaParams b;
  b.beta = in["beta"];
  b.m_beta = in["m_beta"];
  b.L_beta = in["L_beta"];
  b.K_beta = in["K_beta"];
  const double L = in["L"], M = in["M"];
  const int d = in["d"];
  const Certificate c = certify_beta(b, L, M, d);
  const nlohmann::json cj = to_json(c);
  for (const auto& [key, v] : g["values"].items()) {
    const double want = v.get<double>();
    double got;
    if (key == "log_gamma_hat_K4") {
      got = log_gamma_hat_K(4.0, L, M, d);
    } else {
      const auto o = lookup(cj, key);
      ASSERT_TRUE(o) << "missing " << key;
      got = *o;
    }
    expect_rel(got, want, key);
  }
  EXPECT_EQ(c.regime, Regime::A4beta);
}

Certificate gaussian_cert() {
  AssumptionParams p;
  p.M = 0.0;
  return certify(p, 1);
}

TEST(Certificate, BoundIsNonIncreasingInSteps) {
  // the real rate is exp(-e^{-66603}) per block; use a visible one to exercise the decay
  Certificate c = gaussian_cert();
  c.log_neg_log_rho = std::log(0.1);
  const Vec x = Vec::Constant(1, 3.0);
  double prev = bound_at_blocks(c, x, 0);
  for (double n : {1.0, 1e10, 1e300}) {
    const double b = bound_at_blocks(c, x, n);
    EXPECT_LE(b, prev);
    prev = b;
  }
  EXPECT_LT(bound_at_blocks(c, x, 1e300), bound_at_blocks(c, x, 0));
}

TEST(Certificate, BoundIncreasesWithLyapunov) {
  const Certificate c = gaussian_cert();
  EXPECT_LT(bound_at_blocks(c, Vec::Constant(1, 1.0), 5), bound_at_blocks(c, Vec::Constant(1, 1e3), 5));
}

TEST(Certificate, BoundAtFloorsIncompleteBlocks) {
  // gamma_bar far below double range: ask for a certificate at a representable stepsize
  AssumptionParams p;
  p.M = 0.0;
  const Certificate c = certify(p, 1);
  EXPECT_THROW(bound_at(c, Vec::Zero(1), 10, 0.1), DomainError);
  EXPECT_THROW(bound_at_blocks(c, Vec::Zero(1), -1), DomainError);
}

TEST(Certificate, RejectsGammaBarAboveRadius) {
  AssumptionParams p;
  p.M = 0.0;
  try {
    certify(p, 1, {}, 0.1);
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("Gamma_bar"), std::string::npos);
  }
}

TEST(Certificate, RequiresM) {
  AssumptionParams p;
  EXPECT_THROW(certify(p, 1), AssumptionError);
}

TEST(Certificate, JsonRoundTrip) {
  const Certificate c = gaussian_cert();
  const Certificate r = certificate_from_json(nlohmann::json::parse(to_json(c).dump()));
  EXPECT_EQ(r.log_neg_log_rho, c.log_neg_log_rho);
  EXPECT_EQ(r.log_C, c.log_C);
  EXPECT_EQ(r.log_Gamma_bar, c.log_Gamma_bar);
  EXPECT_EQ(r.K_gamma_bar, c.K_gamma_bar);
  EXPECT_EQ(r.regime, c.regime);
  EXPECT_EQ(to_json(r), to_json(c));
}

TEST(Certificate, RateIsStrictlyContracting) {
  const Certificate c = gaussian_cert();
  EXPECT_LE(c.log_rho, 0.0);
  EXPECT_TRUE(std::isfinite(c.log_neg_log_rho));
  EXPECT_GE(c.log_C, 0.0);
  EXPECT_LE(c.log_Gamma_bar, c.log_gamma_bar + 1e-12 * std::abs(c.log_gamma_bar));
}

TEST(Certificate, BetaZeroIsWellDefined) {
  BetaParams b;
  b.beta = 0.0;
  b.m_beta = 0.5;
  b.L_beta = 1.0;
  const Certificate c = certify_beta(b, 1.0, 0.0, 1);
  EXPECT_EQ(c.regime, Regime::A4beta);
  EXPECT_TRUE(std::isfinite(c.log_neg_log_rho));
  EXPECT_TRUE(std::isfinite(c.log_C));
  EXPECT_DOUBLE_EQ(c.log_lyapunov(Vec::Zero(1)), c.eta);
}

}  // namespace
}  // namespace malacert
