#include <cmath>

#include "lsmooth/errors.hpp"
#include "lsmooth/problems.hpp"

namespace lsmooth {

Domain Domain::box(Vector lower, Vector upper) {
  if (lower.size() != upper.size()) throw ConfigurationError("box bounds differ in size", "domain");
  for (Eigen::Index i = 0; i < lower.size(); ++i) {
    if (!(lower[i] < upper[i])) {
      throw ConfigurationError("box must have a nonempty interior", "domain");
    }
  }
  return Domain(Box{std::move(lower), std::move(upper)});
}

Domain Domain::ball(Vector center, double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw ConfigurationError("ball radius must be positive", "domain");
  }
  return Domain(Ball{std::move(center), radius});
}

bool Domain::contains(const Vector& x, std::optional<std::size_t>* offending) const {
  const auto report = [&](std::optional<std::size_t> i) {
    if (offending != nullptr) *offending = i;
    return false;
  };
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i])) return report(static_cast<std::size_t>(i));
  }
  if (std::holds_alternative<PositiveOrthant>(v_)) {
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      if (!(x[i] > 0.0)) return report(static_cast<std::size_t>(i));
    }
  } else if (const auto* b = std::get_if<Box>(&v_)) {
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      if (!(x[i] > b->lower[i] && x[i] < b->upper[i])) return report(static_cast<std::size_t>(i));
    }
  } else if (const auto* b = std::get_if<Ball>(&v_)) {
    if (!((x - b->center).norm() < b->radius)) return report(std::nullopt);
  }
  return true;
}

Vector Domain::project_closure(const Vector& x) const {
  if (std::holds_alternative<PositiveOrthant>(v_)) return x.cwiseMax(0.0);
  if (const auto* b = std::get_if<Box>(&v_)) return x.cwiseMax(b->lower).cwiseMin(b->upper);
  if (const auto* b = std::get_if<Ball>(&v_)) {
    const Vector offset = x - b->center;
    const double dist = offset.norm();
    if (dist <= b->radius) return x;
    return b->center + offset * (b->radius / dist);
  }
  return x;
}

std::string Domain::kind() const {
  switch (v_.index()) {
    case 0: return "full-space";
    case 1: return "positive-orthant";
    case 2: return "box";
    default: return "ball";
  }
}

Vector project_closure(const Domain& domain, const Vector& x) { return domain.project_closure(x); }

}  // namespace lsmooth
