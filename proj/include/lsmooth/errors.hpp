#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace lsmooth {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (s < 0, x ∉ 𝒳, ...).
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what, std::optional<std::size_t> coordinate = std::nullopt)
      : Error(what), coordinate_(coordinate) {}

  /// Offending coordinate, when the violation is attributable to one.
  std::optional<std::size_t> coordinate() const { return coordinate_; }

 private:
  std::optional<std::size_t> coordinate_;
};

/// Argument beyond the range of an inverse map (t ≥ ψ(Δ_max), r ≥ q_max).
class OutOfRangeError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration; `field` holds the offending key path when known.
class ConfigurationError : public Error {
 public:
  explicit ConfigurationError(const std::string& what, std::string field = {})
      : Error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A step left the open set 𝒳 or GD lost distance monotonicity.
class SafetyViolation : public Error {
 public:
  using Error::Error;
};

class BudgetExhausted : public Error {
 public:
  using Error::Error;
};

/// Runtime invariant failed while running in strict mode.
class InvariantViolation : public Error {
 public:
  InvariantViolation(const std::string& what, std::uint32_t flags) : Error(what), flags_(flags) {}

  std::uint32_t flags() const { return flags_; }

 private:
  std::uint32_t flags_;
};

}  // namespace lsmooth
