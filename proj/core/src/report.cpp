/**
 * Copyright The malacert Authors.
 * SPDX-License-Identifier: Apache-2.0
 */
#include "malacert/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace malacert {

std::string to_string(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Skipped: return "skipped";
  }
  return "unknown";
}

bool VerificationReport::pass() const {
  bool any = false;
  for (const auto& c : checks) {
    if (c.status == Status::Fail) return false;
    if (c.status == Status::Pass) any = true;
  }
  return any;
}

bool VerificationReport::suite_pass(const std::string& suite) const {
  bool any = false;
  for (const auto& c : checks) {
    if (c.suite != suite) continue;
    if (c.status == Status::Fail) return false;
    if (c.status == Status::Pass) any = true;
  }
  return any;
}

void VerificationReport::merge(const VerificationReport& other) {
  checks.insert(checks.end(), other.checks.begin(), other.checks.end());
}

namespace {
nlohmann::json finite_or_string(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

nlohmann::json witness_json(const std::vector<std::vector<double>>& w) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& row : w) {
    nlohmann::json r = nlohmann::json::array();
    for (double v : row) r.push_back(finite_or_string(v));
    out.push_back(r);
  }
  return out;
}
}  // namespace

nlohmann::json VerificationReport::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : checks) {
    arr.push_back({{"suite", c.suite},
                   {"name", c.name},
                   {"status", to_string(c.status)},
                   {"worst_margin", finite_or_string(c.worst_margin)},
                   {"witness", witness_json(c.witness)},
                   {"detail", c.detail},
                   {"n_samples", c.n_samples},
                   {"seed", c.seed}});
  }
  long long n_pass = 0, n_fail = 0, n_skip = 0;
  for (const auto& c : checks) {
    if (c.status == Status::Pass) ++n_pass;
    else if (c.status == Status::Fail) ++n_fail;
    else ++n_skip;
  }
  return {{"summary", {{"pass", pass()}, {"passed", n_pass}, {"failed", n_fail}, {"skipped", n_skip}}},
          {"checks", arr}};
}

std::string VerificationReport::table() const {
  std::ostringstream os;
  char line[512];
  std::snprintf(line, sizeof line, "%-14s %-44s %-8s %14s %10s\n", "suite", "check", "status",
                "worst_margin", "samples");
  os << line;
  for (const auto& c : checks) {
    std::snprintf(line, sizeof line, "%-14s %-44s %-8s %14.6g %10lld\n", c.suite.c_str(),
                  c.name.c_str(), to_string(c.status).c_str(), c.worst_margin, c.n_samples);
    os << line;
  }
  os << "summary: " << (pass() ? "pass" : "fail") << "\n";
  return os.str();
}

void MarginTracker::observe(double lhs, double rhs, std::vector<std::vector<double>> w) {
  observe_lazy(lhs, rhs, [&] { return std::move(w); });
}

void MarginTracker::merge(const MarginTracker& o) {
  n_ += o.n_;
  if (!(o.worst_ >= worst_)) {
    worst_ = o.worst_;
    witness_ = o.witness_;
  }
}

Check MarginTracker::to_check(std::string suite, std::string name, std::uint64_t seed,
                              double tolerance, std::string detail) const {
  Check c;
  c.suite = std::move(suite);
  c.name = std::move(name);
  c.seed = seed;
  c.n_samples = n_;
  c.worst_margin = worst_;
  c.detail = std::move(detail);
  if (n_ == 0) {
    c.status = Status::Skipped;
  } else if (worst_ >= -tolerance) {
    c.status = Status::Pass;
  } else {
    c.status = Status::Fail;
    c.witness = witness_;
  }
  return c;
}

}  // namespace malacert
