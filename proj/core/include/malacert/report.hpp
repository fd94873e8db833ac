/**
 * Copyright The malacert Authors.
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace malacert {

enum class Status { Pass, Fail, Skipped };

std::string to_string(Status s);

/// One checked inequality. `worst_margin` is the smallest observed slack
/// (rhs - lhs, in the check's natural units); negative means violated.
struct Check {
  std::string suite;
  std::string name;
  Status status = Status::Skipped;
  double worst_margin = 0.0;
  std::vector<std::vector<double>> witness;  // inputs reproducing the worst case
  std::string detail;
  long long n_samples = 0;
  std::uint64_t seed = 0;
};

struct VerificationReport {
  std::vector<Check> checks;

  /// True iff no non-skipped check failed (and at least one ran).
  bool pass() const;
  bool suite_pass(const std::string& suite) const;
  void add(Check c) { checks.push_back(std::move(c)); }
  void merge(const VerificationReport& other);

  nlohmann::json to_json() const;
  std::string table() const;
};

/// Streaming tracker for the worst margin of an inequality lhs <= rhs.
class MarginTracker {
 public:
  void observe(double lhs, double rhs, std::vector<std::vector<double>> witness_if_worse = {});
  /// Overload taking a lazily built witness, so the hot path allocates nothing.
  template <class F>
  void observe_lazy(double lhs, double rhs, F&& make_witness) {
    const double margin = rhs - lhs;
    ++n_;
    if (!(margin >= worst_)) {
      worst_ = margin;
      witness_ = make_witness();
    }
  }
  double worst() const { return worst_; }
  long long count() const { return n_; }
  const std::vector<std::vector<double>>& witness() const { return witness_; }
  void merge(const MarginTracker& o);

  /// Builds a Check that passes iff worst() >= -tolerance.
  Check to_check(std::string suite, std::string name, std::uint64_t seed, double tolerance = 0.0,
                 std::string detail = {}) const;

 private:
  double worst_ = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> witness_;
  long long n_ = 0;
};

}  // namespace malacert
