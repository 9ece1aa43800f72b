#pragma once

#include <compare>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace lsmooth {

/// A real number or +∞.
///
/// Quantities such as Δ_max, Δ_right or q_max may be unbounded. They are
/// carried with an explicit "infinite" tag instead of a large float so that
/// comparisons against them are exact.
class ExtendedReal {
 public:
  constexpr ExtendedReal(double value) : value_(value), infinite_(false) {}  // NOLINT

  static constexpr ExtendedReal infinity() { return ExtendedReal(Tag{}); }

  constexpr bool is_infinite() const { return infinite_; }
  constexpr bool is_finite() const { return !infinite_; }

  /// The finite value. Throws std::logic_error on +∞.
  double value() const {
    if (infinite_) throw std::logic_error("ExtendedReal::value() called on +inf");
    return value_;
  }

  /// The value as an IEEE double (+inf for the infinite sentinel), for output only.
  constexpr double to_double() const {
    return infinite_ ? std::numeric_limits<double>::infinity() : value_;
  }

  constexpr std::partial_ordering operator<=>(double rhs) const {
    if (infinite_) return std::partial_ordering::greater;
    return value_ <=> rhs;
  }
  constexpr bool operator==(double rhs) const { return !infinite_ && value_ == rhs; }

  constexpr std::partial_ordering operator<=>(const ExtendedReal& rhs) const {
    if (infinite_ && rhs.infinite_) return std::partial_ordering::equivalent;
    if (infinite_) return std::partial_ordering::greater;
    if (rhs.infinite_) return std::partial_ordering::less;
    return value_ <=> rhs.value_;
  }
  constexpr bool operator==(const ExtendedReal& rhs) const {
    return infinite_ == rhs.infinite_ && (infinite_ || value_ == rhs.value_);
  }

 private:
  struct Tag {};
  constexpr explicit ExtendedReal(Tag) : value_(0.0), infinite_(true) {}

  double value_;
  bool infinite_;
};

inline std::ostream& operator<<(std::ostream& os, const ExtendedReal& x) {
  if (x.is_infinite()) return os << "+inf";
  return os << x.value();
}

}  // namespace lsmooth
