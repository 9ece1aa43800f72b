#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

namespace lsmooth {

struct ConstantEll {
  double L;
};

struct AffineEll {
  double L0;
  double L1;
};

/// ℓ(s) = L0 + L1·s^rho.
struct PowerEll {
  double rho;
  double L0;
  double L1;
};

/// Piecewise-linear ℓ through (s, ℓ(s)) breakpoints; constant outside them.
struct CustomEll {
  std::vector<std::pair<double, double>> points;
};

/// The smoothness profile ℓ of ‖∇²f(x)‖ ≤ ℓ(‖∇f(x)‖).
///
/// Immutable after construction. The factories validate positivity and
/// monotonicity and throw ConfigurationError otherwise.
class EllModel {
 public:
  using Variant = std::variant<ConstantEll, AffineEll, PowerEll, CustomEll>;

  static EllModel constant(double L);
  static EllModel affine(double L0, double L1);
  static EllModel power(double rho, double L0, double L1);
  static EllModel custom(std::vector<std::pair<double, double>> points);

  /// Parses `{"kind":"affine","L0":1,"L1":1}` and friends.
  static EllModel from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  /// ℓ(s). Throws DomainError for s < 0.
  double operator()(double s) const;
  double at_zero() const { return (*this)(0.0); }

  const Variant& variant() const { return v_; }
  std::string kind() const;

  /// True for Power models with rho > 2 and L1 > 0 (ψ is not monotone).
  bool is_superquadratic() const;

  /// ℓ takes a single value on [0, ∞).
  bool is_constant() const;

 private:
  explicit EllModel(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

double ell_eval(const EllModel& model, double s);

}  // namespace lsmooth
