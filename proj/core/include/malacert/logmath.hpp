/**
 * Copyright The malacert Authors.
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <limits>
#include <span>

namespace malacert {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// log(e^a + e^b), exact for infinite arguments.
double logaddexp(double a, double b);

/// log(sum_i e^{x_i}); returns -inf for an empty span.
double logsumexp(std::span<const double> xs);

/// log(1 - e^{a}) for a <= 0.
double log1mexp(double a);

/// log(1 - p) for p in [0, 1], accurate for tiny p given only log p.
double log1m_from_log(double log_p);

/// log Phi(-t) for the standard normal CDF Phi.
/// erfc in the body, a continued fraction for the Mills ratio when t > 8.
double log_normal_cdf_neg(double t);

/// Tail branch of log_normal_cdf_neg, valid for t >= 3.
double log_normal_cdf_neg_tail(double t);

/// Three-term asymptotic tail: -t^2/2 - log(t sqrt(2 pi)) + log(1 - 1/t^2 + 3/t^4).
double log_normal_cdf_neg_asymptotic(double t);

/// Standard normal CDF.
double normal_cdf(double x);

/// Log-mean-exp estimate with a delta-method standard error (on the log scale).
struct LogMeanExp {
  double value;
  double se;
};
LogMeanExp log_mean_exp(std::span<const double> log_samples);

/// Accumulates log-domain samples in streaming fashion (shifted by the running max).
class LogMeanExpAccumulator {
 public:
  void add(double log_x);
  void merge(const LogMeanExpAccumulator& other);
  LogMeanExp result() const;
  long long count() const { return n_; }

 private:
  void rescale(double new_shift);
  double shift_ = kNegInf;
  double s1_ = 0.0;  // sum e^{x - shift}
  double s2_ = 0.0;  // sum e^{2(x - shift)}
  long long n_ = 0;
};

}  // namespace malacert
