#include <cmath>
#include <numbers>

#include "lsmooth/errors.hpp"
#include "lsmooth/problems.hpp"

namespace lsmooth {

Problem::Problem(std::string name, std::size_t dimension, Oracle oracle, Domain domain,
                 EllModel model, std::optional<Optimum> optimum, Box sample_region)
    : name_(std::move(name)),
      dimension_(dimension),
      oracle_(std::move(oracle)),
      domain_(std::move(domain)),
      model_(std::move(model)),
      optimum_(std::move(optimum)),
      sample_region_(std::move(sample_region)) {}

Evaluation Problem::evaluate(const Vector& x) const {
  if (static_cast<std::size_t>(x.size()) != dimension_) {
    throw DomainError(name_ + ": point has dimension " + std::to_string(x.size()) + ", expected " +
                      std::to_string(dimension_));
  }
  std::optional<std::size_t> coord;
  if (!domain_.contains(x, &coord)) {
    throw DomainError(name_ + ": point outside the domain" +
                          (coord ? " (coordinate " + std::to_string(*coord) + ")" : ""),
                      coord);
  }
  return oracle_(x);
}

namespace {

double param(const nlohmann::json& params, const char* key, double fallback) {
  if (!params.contains(key)) return fallback;
  const auto& v = params.at(key);
  if (!v.is_number()) throw ConfigurationError("must be a number", std::string("params.") + key);
  return v.get<double>();
}

std::size_t dim_param(const nlohmann::json& params, std::size_t fallback) {
  const double d = param(params, "d", static_cast<double>(fallback));
  if (!(d >= 1.0) || d != std::floor(d) || d > 1e6) {
    throw ConfigurationError("must be a positive integer", "params.d");
  }
  return static_cast<std::size_t>(d);
}

Box cube(std::size_t d, double lo, double hi) {
  return Box{Vector::Constant(static_cast<Eigen::Index>(d), lo),
             Vector::Constant(static_cast<Eigen::Index>(d), hi)};
}

Problem exp_experiment(const nlohmann::json& params) {
  const double mu = param(params, "mu", 0.001);
  if (!(mu > 0.0)) throw ConfigurationError("must be positive", "params.mu");
  auto oracle = [mu](const Vector& x) {
    const double a = std::exp(x[0]);
    const double b = std::exp(1.0 - x[0]);
    Vector g(2);
    g << a - b, mu * x[1];
    return Evaluation{a + b + 0.5 * mu * x[1] * x[1], std::move(g)};
  };
  Vector xstar(2);
  xstar << 0.5, 0.0;
  return Problem("exp-experiment", 2, oracle, Domain::full_space(),
                 EllModel::affine(3.3 + mu, 1.0), Optimum{xstar, 2.0 * std::sqrt(std::numbers::e)},
                 cube(2, -3.0, 3.0));
}

/// ½ Σ λᵢxᵢ² with λᵢ = L·ratio^{-i}; ratio = 1 is the isotropic ½L‖x‖².
Problem quadratic(const nlohmann::json& params) {
  const double L = param(params, "L", 1.0);
  const double ratio = param(params, "ratio", 1.0);
  const std::size_t d = dim_param(params, 2);
  if (!(L > 0.0)) throw ConfigurationError("must be positive", "params.L");
  if (!(ratio >= 1.0)) throw ConfigurationError("must be >= 1", "params.ratio");
  Vector lambda(static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    lambda[i] = L * std::pow(ratio, -static_cast<double>(i));
  }
  auto oracle = [lambda](const Vector& x) {
    Vector g = lambda.cwiseProduct(x);
    return Evaluation{0.5 * x.dot(g), std::move(g)};
  };
  return Problem("quadratic", d, oracle, Domain::full_space(), EllModel::constant(L),
                 Optimum{Vector::Zero(static_cast<Eigen::Index>(d)), 0.0}, cube(d, -2.0, 2.0));
}

/// Σ xᵢᵖ for even p > 2. With m = max|xᵢ|, ‖∇²f‖ = p(p−1)m^{p−2} and
/// ‖∇f‖ ≥ p·m^{p−1}, so ℓ(s) = L0 + (p−1)p^{1/(p−1)}·s^{(p−2)/(p−1)} holds
/// for any L0 > 0.
Problem power_p(const nlohmann::json& params) {
  const double p = param(params, "p", 4.0);
  const double L0 = param(params, "L0", 1.0);
  const std::size_t d = dim_param(params, 2);
  if (!(p > 2.0) || p != std::floor(p) || std::fmod(p, 2.0) != 0.0 || p > 64.0) {
    throw ConfigurationError("must be an even integer greater than 2", "params.p");
  }
  if (!(L0 > 0.0)) throw ConfigurationError("must be positive", "params.L0");
  auto oracle = [p](const Vector& x) {
    double f = 0.0;
    Vector g(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const double xp1 = std::pow(x[i], p - 1.0);
      f += xp1 * x[i];
      g[i] = p * xp1;
    }
    return Evaluation{f, std::move(g)};
  };
  const double rho = (p - 2.0) / (p - 1.0);
  const double L1 = (p - 1.0) * std::pow(p, 1.0 / (p - 1.0));
  return Problem("power-p", d, oracle, Domain::full_space(), EllModel::power(rho, L0, L1),
                 Optimum{Vector::Zero(static_cast<Eigen::Index>(d)), 0.0}, cube(d, -1.5, 1.5));
}

/// −Σ log xᵢ + (c/2)‖x‖² on the positive orthant. Per coordinate
/// 1/xᵢ² = gᵢ² + 2c − c²xᵢ² ≤ gᵢ² + 2c, hence ‖∇²f‖ ≤ 3c + ‖∇f‖².
Problem neg_log_barrier(const nlohmann::json& params) {
  const double c = param(params, "c", 1.0);
  const std::size_t d = dim_param(params, 2);
  if (!(c > 0.0)) throw ConfigurationError("must be positive", "params.c");
  auto oracle = [c](const Vector& x) {
    double f = 0.0;
    Vector g(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      f += -std::log(x[i]) + 0.5 * c * x[i] * x[i];
      g[i] = -1.0 / x[i] + c * x[i];
    }
    return Evaluation{f, std::move(g)};
  };
  const double xs = 1.0 / std::sqrt(c);
  const double fstar = static_cast<double>(d) * 0.5 * (std::log(c) + 1.0);
  return Problem("neg-log-barrier", d, oracle, Domain::positive_orthant(),
                 EllModel::power(2.0, 3.0 * c, 1.0),
                 Optimum{Vector::Constant(static_cast<Eigen::Index>(d), xs), fstar},
                 cube(d, 0.05 * xs, 3.0 * xs));
}

Problem exp_1d(const nlohmann::json&) {
  auto oracle = [](const Vector& x) {
    const double a = std::exp(x[0]);
    const double b = std::exp(-x[0]);
    Vector g(1);
    g << a - b;
    return Evaluation{a + b, std::move(g)};
  };
  return Problem("exp-1d", 1, oracle, Domain::full_space(), EllModel::affine(2.0, 1.0),
                 Optimum{Vector::Zero(1), 2.0}, cube(1, -3.0, 3.0));
}

}  // namespace

const std::vector<CatalogEntry>& catalog_entries() {
  static const std::vector<CatalogEntry> entries{
      {"exp-experiment", "exp(x) + exp(1-x) + (mu/2) y^2, affine l = (3.3 + mu, 1)",
       {{"mu", 0.001}}},
      {"quadratic", "1/2 sum L ratio^-i x_i^2, constant l = L", {{"L", 1.0}, {"d", 2}, {"ratio", 1.0}}},
      {"power-p", "sum x_i^p for even p > 2, power l with rho = (p-2)/(p-1)",
       {{"p", 4}, {"d", 2}, {"L0", 1.0}}},
      {"neg-log-barrier", "-sum log x_i + (c/2)|x|^2 on the positive orthant, power l = 3c + s^2",
       {{"c", 1.0}, {"d", 2}}},
      {"exp-1d", "exp(x) + exp(-x), affine l = (2, 1)", nlohmann::json::object()},
  };
  return entries;
}

Problem catalog(const std::string& name, const nlohmann::json& params) {
  if (!params.is_null() && !params.is_object()) {
    throw ConfigurationError("params must be an object", "problem.params");
  }
  const nlohmann::json p = params.is_null() ? nlohmann::json::object() : params;
  if (name == "exp-experiment") return exp_experiment(p);
  if (name == "quadratic") return quadratic(p);
  if (name == "power-p") return power_p(p);
  if (name == "neg-log-barrier") return neg_log_barrier(p);
  if (name == "exp-1d") return exp_1d(p);
  throw ConfigurationError("unknown problem '" + name + "'", "problem.name");
}

double finite_diff_check(const Problem& problem, const Vector& x, double h) {
  if (!(h > 0.0)) throw DomainError("finite_diff_check: h must be positive");
  const Vector g = problem.evaluate(x).gradient;
  double worst = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Vector plus = x;
    Vector minus = x;
    plus[i] += h;
    minus[i] -= h;
    for (const Vector* p : {&plus, &minus}) {
      std::optional<std::size_t> coord;
      if (!problem.domain().contains(*p, &coord)) {
        throw DomainError("finite_diff_check: stencil leaves the domain at coordinate " +
                              std::to_string(i),
                          static_cast<std::size_t>(i));
      }
    }
    const double fd = (problem.evaluate(plus).value - problem.evaluate(minus).value) / (2.0 * h);
    worst = std::max(worst, std::abs(fd - g[i]) / std::max(1.0, std::abs(g[i])));
  }
  return worst;
}

}  // namespace lsmooth
