#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gup {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numeric input lies outside the domain of a map, model or boost.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Raised by the integrator when a stage leaves the model domain.
class IntegrationDomainError : public DomainError {
 public:
  IntegrationDomainError(std::size_t step, const std::string& what)
      : DomainError("step " + std::to_string(step) + ": " + what), step_(step) {}

  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

/// Requested velocity is not attainable on the monotone momentum branch.
class NoRootError : public DomainError {
 public:
  using DomainError::DomainError;
};

class NonConvergenceError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Two Euclidean boosts whose angles sum to pi/2 (V1 V2 = u^2).
class SingularCompositionError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Lorentz boost with |V| >= c_eff.
class SuperluminalBoostError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Malformed or inconsistent scenario input. Carries the offending key or line when known.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what, std::string key = {}, std::size_t line = 0)
      : Error(format(what, key, line)), key_(std::move(key)), line_(line) {}

  const std::string& key() const noexcept { return key_; }
  std::size_t line() const noexcept { return line_; }

 private:
  static std::string format(const std::string& what, const std::string& key, std::size_t line) {
    std::string out;
    if (line > 0) out += "line " + std::to_string(line) + ": ";
    if (!key.empty()) out += "'" + key + "': ";
    return out + what;
  }

  std::string key_;
  std::size_t line_;
};

}  // namespace gup
