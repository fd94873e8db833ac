/**
 * Copyright The malacert Authors.
 * SPDX-License-Identifier: Apache-2.0
 */
#include "malacert/certificate.hpp"
#include "malacert/kernels.hpp"
#include "malacert/ratio.hpp"

#include <benchmark/benchmark.h>

using namespace malacert;

static void BM_TauDirect(benchmark::State& st) {
  const int d = static_cast<int>(st.range(0));
  const BuiltinPotential p = builtin("bump", d);
  NoiseStream rng(1, 0);
  const Vec x = rng.normal_vector(d), z = rng.normal_vector(d);
  for (auto _ : st) benchmark::DoNotOptimize(tau_direct(p.spec, x, z, 0.1));
}
BENCHMARK(BM_TauDirect)->Arg(1)->Arg(10)->Arg(100);

static void BM_TauDecomposed(benchmark::State& st) {
  const int d = static_cast<int>(st.range(0));
  const BuiltinPotential p = builtin("bump", d);
  NoiseStream rng(1, 0);
  const Vec x = rng.normal_vector(d), z = rng.normal_vector(d);
  for (auto _ : st) benchmark::DoNotOptimize(tau_decomposed(p.spec, x, z, 0.1).value);
}
BENCHMARK(BM_TauDecomposed)->Arg(1)->Arg(10)->Arg(100);

static void BM_MalaStep(benchmark::State& st) {
  const int d = static_cast<int>(st.range(0));
  const BuiltinPotential p = builtin("gaussian", d);
  NoiseStream rng(2, 0);
  ChainState s{Vec::Zero(d), 0, 0};
  Vec z(d);
  for (auto _ : st) {
    rng.fill_normal(z);
    s = mala_step(s, p.spec, 0.1, z, rng.uniform()).state;
  }
  benchmark::DoNotOptimize(s.x.data());
}
BENCHMARK(BM_MalaStep)->Arg(1)->Arg(10)->Arg(100);

static void BM_Certify(benchmark::State& st) {
  AssumptionParams p;
  p.M = 0.0;
  for (auto _ : st) benchmark::DoNotOptimize(certify(p, 1).log_C);
}
BENCHMARK(BM_Certify);

static void BM_CertifyBeta(benchmark::State& st) {
  BetaParams b;
  b.beta = 0.5;
  b.m_beta = 0.495;
  b.L_beta = 1.7;
  for (auto _ : st) benchmark::DoNotOptimize(certify_beta(b, 1.0, 0.5, 2).log_C);
}
BENCHMARK(BM_CertifyBeta);
BENCHMARK_MAIN();
