/**
 * Copyright The malacert Authors.
 * SPDX-License-Identifier: Apache-2.0
 */
#include "CLI11.hpp"

#include "malacert/certificate.hpp"
#include "malacert/config.hpp"
#include "malacert/errors.hpp"
#include "malacert/kernels.hpp"
#include "malacert/minorization.hpp"
#include "malacert/parallel.hpp"
#include "malacert/ratio.hpp"
#include "malacert/rng.hpp"
#include "malacert/verify.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace malacert;

namespace {

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNonFinite = 3;

struct Common {
  std::string config;
  std::string out;
  unsigned threads = 0;
  std::vector<std::string> suites;
  std::optional<std::uint64_t> seed;
};

RunConfig load(const Common& c) {
  RunConfig rc = load_config(c.config);
  if (c.seed) rc.seed = *c.seed;
  if (!c.out.empty()) rc.output.dir = c.out;
  if (!c.suites.empty()) rc.verify.suites = c.suites;
  return rc;
}

fs::path out_path(const RunConfig& rc, const std::string& name) {
  fs::create_directories(rc.output.dir);
  return fs::path(rc.output.dir) / name;
}

void write_json(const fs::path& p, const nlohmann::json& j) {
  std::ofstream f(p);
  if (!f) throw ConfigError("cannot write " + p.string());
  f << j.dump(2) << '\n';
}

std::string fmt_radius(double log_r) {
  std::ostringstream os;
  os << std::setprecision(17);
  if (std::exp(log_r) < kLogReportThreshold) os << "exp(" << log_r << ")";
  else os << std::exp(log_r);
  return os.str();
}

BuiltinPotential make_potential(const RunConfig& rc) {
  return builtin(rc.potential_kind, rc.dim, rc.potential_params);
}

int cmd_certify(const Common& c) {
  const RunConfig rc = load(c);
  Certificate cert;
  if (rc.assumptions) {
    cert = certify(*rc.assumptions, rc.dim, rc.upsilons, rc.gamma_bar);
  } else {
    if (!rc.beta->M) throw AssumptionError("third-derivative bound M is required for quantitative certificates");
    cert = certify_beta(rc.beta->params, rc.beta->L, *rc.beta->M, rc.dim, rc.upsilons, rc.gamma_bar);
  }
  const fs::path p = out_path(rc, rc.output.certificate);
  write_json(p, to_json(cert));
  std::cout << std::setprecision(17) << "regime        " << to_string(cert.regime) << '\n'
            << "Gamma_bar     " << fmt_radius(cert.log_Gamma_bar) << '\n'
            << "log rho/block -exp(" << cert.log_neg_log_rho << ")\n"
            << "K_gamma_bar   " << cert.K_gamma_bar << '\n'
            << "log C         " << cert.log_C << '\n'
            << "written       " << p.string() << '\n';
  return 0;
}

int cmd_sample(const Common& c) {
  const RunConfig rc = load(c);
  const BuiltinPotential bp = make_potential(rc);
  const Vec x0 = start_point(rc);
  const auto t0 = std::chrono::steady_clock::now();
  ChainOptions co;
  co.thin = rc.thin;
  Vec mean = Vec::Zero(rc.dim), m2 = Vec::Zero(rc.dim);
  double acc = 0.0;
  for (long long i = 0; i < rc.n_chains; ++i) {
    NoiseStream rng(rc.seed, static_cast<std::uint64_t>(i));
    const Trajectory tr = run_chain(rc.kernel, bp.spec, x0, rc.gamma, rc.n_steps, rng, co);
    std::string name = rc.output.trajectory;
    if (rc.n_chains > 1) {
      const fs::path base(name);
      name = base.stem().string() + "_" + std::to_string(i) + base.extension().string();
    }
    std::ofstream f(out_path(rc, name));
    tr.write_csv(f);
    mean += tr.mean;
    m2 += tr.second_moment;
    acc += tr.acceptance_rate;
  }
  const double n = static_cast<double>(rc.n_chains);
  mean /= n;
  m2 /= n;
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  nlohmann::json s = {{"kernel", to_string(rc.kernel)},
                      {"gamma", rc.gamma},
                      {"n_steps", rc.n_steps},
                      {"n_chains", rc.n_chains},
                      {"mean", std::vector<double>(mean.data(), mean.data() + rc.dim)},
                      {"second_moment", std::vector<double>(m2.data(), m2.data() + rc.dim)},
                      {"runtime_seconds", secs}};
  s["acceptance_rate"] = rc.kernel == KernelKind::MALA ? nlohmann::json(acc / n) : nlohmann::json(nullptr);
  write_json(out_path(rc, rc.output.summary), s);
  std::cout << s.dump(2) << '\n';
  return 0;
}

int cmd_verify(const Common& c) {
  const RunConfig rc = load(c);
  const BuiltinPotential bp = make_potential(rc);
  VerifyOptions o;
  o.seed = rc.seed;
  o.suites.insert(rc.verify.suites.begin(), rc.verify.suites.end());
  const VerifyBudget& b = rc.verify;
  if (b.n_se) o.n_se = *b.n_se;
  if (b.n_probe) o.n_probe = *b.n_probe;
  if (b.n_tau) o.n_tau = *b.n_tau;
  if (b.n_moment_mc) o.n_moment_mc = *b.n_moment_mc;
  if (b.n_drift_mc) o.n_drift_mc = *b.n_drift_mc;
  if (b.n_tail) o.n_tail = *b.n_tail;
  if (b.invariance_steps) o.invariance_steps = *b.invariance_steps;
  if (b.envelope_chains) o.envelope_chains = *b.envelope_chains;
  const VerificationReport rep =
      rc.assumptions ? verify_all(bp.spec, *rc.assumptions, o)
                     : verify_all_beta(bp.spec, rc.beta->params, rc.beta->L, rc.beta->M, o);
  write_json(out_path(rc, rc.output.report), rep.to_json());
  std::cout << rep.table();
  return rep.pass() ? 0 : kExitFail;
}

int cmd_tau(const Common& c) {
  const RunConfig rc = load(c);
  const BuiltinPotential bp = make_potential(rc);
  const Vec x = start_point(rc);
  NoiseStream rng(rc.seed, 0);
  const Vec z = rng.normal_vector(rc.dim);
  const TauTerms t = tau_decomposed_adaptive(bp.spec, x, z, rc.gamma);
  std::cout << std::setprecision(17) << "tau_direct     " << tau_direct(bp.spec, x, z, rc.gamma) << '\n'
            << "tau_densities  " << tau_via_densities(bp.spec, x, z, rc.gamma) << '\n'
            << "tau_decomposed " << t.value << " (order " << t.quadrature_order << ")\n"
            << "  A2 " << t.a2 << "\n  A3 " << t.a3 << "\n  A4 " << t.a4 << "\n  A5 " << t.a5
            << "\n  A6 " << t.a6 << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"malacert: MALA/ULA sampling, ergodicity certificates and their numerical checks"};
  app.require_subcommand(1);
  Common common;
  std::uint64_t seed = 0;
  auto add_common = [&](CLI::App* s) {
    s->add_option("--config", common.config, "run configuration (JSON)")->required()->check(CLI::ExistingFile);
    s->add_option("--out", common.out, "output directory (overrides the config)");
    s->add_option("--threads", common.threads, "worker threads (default: all cores)");
    s->add_option("--seed", seed, "override the configured seed");
  };
  CLI::App* certify_cmd = app.add_subcommand("certify", "compute the convergence certificate");
  CLI::App* sample_cmd = app.add_subcommand("sample", "run chains and write trajectories");
  CLI::App* verify_cmd = app.add_subcommand("verify", "run the numerical verification suites");
  CLI::App* tau_cmd = app.add_subcommand("tau", "print the acceptance exponent by every route");
  for (CLI::App* s : {certify_cmd, sample_cmd, verify_cmd, tau_cmd}) add_common(s);
  verify_cmd->add_option("--suite", common.suites, "suites to run")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitUsage;
  }
  for (CLI::App* s : {certify_cmd, sample_cmd, verify_cmd, tau_cmd})
    if (s->count("--seed")) common.seed = seed;
  if (common.threads > 0) set_num_threads(common.threads);

  try {
    if (*certify_cmd) return cmd_certify(common);
    if (*sample_cmd) return cmd_sample(common);
    if (*verify_cmd) return cmd_verify(common);
    if (*tau_cmd) return cmd_tau(common);
  } catch (const NonFiniteError& e) {
    std::cerr << "error: " << e.what();
    if (e.step() >= 0) std::cerr << " (step " << e.step() << ")";
    std::cerr << '\n';
    return kExitNonFinite;
  } catch (const AssumptionError& e) {
    std::cerr << "assumption error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
