/**
 * Copyright The malacert Authors.
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace malacert {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A NaN or infinity appeared; `step` is the chain step (or -1 outside a chain).
class NonFiniteError : public Error {
 public:
  explicit NonFiniteError(const std::string& what, std::int64_t step = -1)
      : Error(what), step_(step) {}
  std::int64_t step() const noexcept { return step_; }

 private:
  std::int64_t step_;
};

/// An argument lies outside the range where a bound or formula is stated.
class DomainError : public Error {
 public:
  using Error::Error;
};

class UnknownKindError : public Error {
 public:
  using Error::Error;
};

class InvalidParamError : public Error {
 public:
  using Error::Error;
};

/// Probing shell has radius <= K.
class DegenerateShellError : public Error {
 public:
  using Error::Error;
};

/// A constant required by the requested computation is missing.
class AssumptionError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace malacert
