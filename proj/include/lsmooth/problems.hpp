#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "lsmooth/ell_model.hpp"

namespace lsmooth {

using Vector = Eigen::VectorXd;

struct FullSpace {};
struct PositiveOrthant {};
struct Box {
  Vector lower;  // -inf allowed
  Vector upper;  // +inf allowed
};
struct Ball {
  Vector center;
  double radius;
};

/// Open convex set 𝒳 together with its closure.
class Domain {
 public:
  using Variant = std::variant<FullSpace, PositiveOrthant, Box, Ball>;

  Domain() : v_(FullSpace{}) {}
  static Domain full_space() { return Domain(FullSpace{}); }
  static Domain positive_orthant() { return Domain(PositiveOrthant{}); }
  static Domain box(Vector lower, Vector upper);
  static Domain ball(Vector center, double radius);

  /// True when x lies in the open set. On failure `offending` receives the
  /// first violating coordinate (nullopt for a ball).
  bool contains(const Vector& x, std::optional<std::size_t>* offending = nullptr) const;

  /// Euclidean projection onto the closure.
  Vector project_closure(const Vector& x) const;

  const Variant& variant() const { return v_; }
  std::string kind() const;

 private:
  explicit Domain(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

Vector project_closure(const Domain& domain, const Vector& x);

struct Evaluation {
  double value;
  Vector gradient;
};

struct Optimum {
  Vector point;
  double value;
};

/// An objective f with its domain, claimed ℓ-profile and (optionally) a
/// known minimizer. Immutable and safe to share across threads.
class Problem {
 public:
  using Oracle = std::function<Evaluation(const Vector&)>;

  Problem(std::string name, std::size_t dimension, Oracle oracle, Domain domain, EllModel model,
          std::optional<Optimum> optimum, Box sample_region);

  /// (f(x), ∇f(x)). Throws DomainError when x is not in the open set 𝒳.
  Evaluation evaluate(const Vector& x) const;

  const std::string& name() const { return name_; }
  std::size_t dimension() const { return dimension_; }
  const Domain& domain() const { return domain_; }
  const EllModel& ell_model() const { return model_; }
  const std::optional<Optimum>& optimum() const { return optimum_; }
  /// Box of interior points used by randomized property sweeps.
  const Box& sample_region() const { return sample_region_; }

 private:
  std::string name_;
  std::size_t dimension_;
  Oracle oracle_;
  Domain domain_;
  EllModel model_;
  std::optional<Optimum> optimum_;
  Box sample_region_;
};

/// Builds a catalog problem. Known names: exp-experiment, quadratic,
/// power-p, neg-log-barrier, exp-1d. Throws ConfigurationError on an
/// unknown name or invalid parameter.
Problem catalog(const std::string& name, const nlohmann::json& params = nlohmann::json::object());

struct CatalogEntry {
  std::string name;
  std::string description;
  nlohmann::json default_params;
};
const std::vector<CatalogEntry>& catalog_entries();

/// Max over coordinates of |central difference − ∂ᵢf| / max(1, |∂ᵢf|).
/// Throws DomainError when the stencil leaves 𝒳.
double finite_diff_check(const Problem& problem, const Vector& x, double h);

}  // namespace lsmooth
