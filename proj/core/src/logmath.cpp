/**
 * Copyright The malacert Authors.
 * SPDX-License-Identifier: Apache-2.0
 */
#include "malacert/logmath.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace malacert {

double logaddexp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

double logsumexp(std::span<const double> xs) {
  double hi = kNegInf;
  for (double x : xs) hi = std::max(hi, x);
  if (hi == kNegInf || !std::isfinite(hi)) return hi;
  double s = 0.0;
  for (double x : xs) s += std::exp(x - hi);
  return hi + std::log(s);
}

double log1mexp(double a) {
  if (a > -std::numbers::ln2) return std::log(-std::expm1(a));
  return std::log1p(-std::exp(a));
}

double log1m_from_log(double log_p) {
  if (log_p < std::log(1e-12)) {
    // -p - p^2/2; the second term is below round-off unless p is near the threshold
    const double p = std::exp(log_p);
    return -p - 0.5 * p * p;
  }
  return log1mexp(log_p);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

namespace {

// Mills ratio R(t) = (1 - Phi(t)) / phi(t) via the Laplace continued fraction,
// evaluated bottom-up: R = 1/(t + 1/(t + 2/(t + 3/(t + ...)))).
double mills_ratio(double t) {
  const int depth = 200;
  double f = t;
  for (int k = depth; k >= 1; --k) f = t + k / f;
  return 1.0 / f;
}

}  // namespace

double log_normal_cdf_neg_tail(double t) {
  const double log_phi = -0.5 * t * t - 0.5 * std::log(2.0 * std::numbers::pi);
  return log_phi + std::log(mills_ratio(t));
}

double log_normal_cdf_neg(double t) {
  if (t <= 8.0) return std::log(0.5 * std::erfc(t / std::numbers::sqrt2));
  return log_normal_cdf_neg_tail(t);
}

double log_normal_cdf_neg_asymptotic(double t) {
  const double t2 = t * t;
  return -0.5 * t2 - std::log(t * std::sqrt(2.0 * std::numbers::pi)) +
         std::log1p(-1.0 / t2 + 3.0 / (t2 * t2));
}

LogMeanExp log_mean_exp(std::span<const double> log_samples) {
  LogMeanExpAccumulator acc;
  for (double x : log_samples) acc.add(x);
  return acc.result();
}

void LogMeanExpAccumulator::rescale(double new_shift) {
  if (shift_ != kNegInf) {
    const double f = std::exp(shift_ - new_shift);
    s1_ *= f;
    s2_ *= f * f;
  }
  shift_ = new_shift;
}

void LogMeanExpAccumulator::add(double log_x) {
  ++n_;
  if (log_x == kNegInf) return;
  if (log_x > shift_) rescale(log_x);
  const double e = std::exp(log_x - shift_);
  s1_ += e;
  s2_ += e * e;
}

void LogMeanExpAccumulator::merge(const LogMeanExpAccumulator& o) {
  if (o.shift_ > shift_) rescale(o.shift_);
  if (o.shift_ != kNegInf) {
    const double f = std::exp(o.shift_ - shift_);
    s1_ += o.s1_ * f;
    s2_ += o.s2_ * f * f;
  }
  n_ += o.n_;
}

LogMeanExp LogMeanExpAccumulator::result() const {
  if (n_ == 0 || s1_ == 0.0) return {kNegInf, 0.0};
  const double n = static_cast<double>(n_);
  const double mean = s1_ / n;
  const double var = std::max(s2_ / n - mean * mean, 0.0) * n / std::max(n - 1.0, 1.0);
  // delta method: se(log mean) = se(mean) / mean
  return {shift_ + std::log(mean), std::sqrt(var / n) / mean};
}

}  // namespace malacert
