#include "lsmooth/smoothness.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "lsmooth/errors.hpp"
#include "lsmooth/numeric.hpp"

namespace lsmooth {

namespace {

constexpr int kKnotSubdivisions = 64;
// Relative step for the finite-difference monotonicity probe; balances the
// O(h) bias against cancellation in ψ(x + h) − ψ(x).
constexpr double kProbeStep = 1e-8;
// q_max tail is replaced by its leading-order term once L0/(L1·W^ρ) < this.
constexpr double kTailCutoff = 1e-13;

bool increasing_at(const EllModel& model, double x) {
  const double h = kProbeStep * std::max(x, 1e-12);
  return psi_eval(model, x + h) > psi_eval(model, x);
}

ExtendedReal scan_grid(const EllModel& model, const std::vector<double>& grid) {
  double prev = psi_eval(model, grid.front());
  for (std::size_t j = 1; j < grid.size(); ++j) {
    const double cur = psi_eval(model, grid[j]);
    if (cur <= prev) {
      const double lo = j >= 2 ? grid[j - 2] : grid[0];
      const double hi = grid[j];
      auto [a, b] =
          numeric::bisect_predicate([&](double x) { return increasing_at(model, x); }, lo, hi);
      return 0.5 * (a + b);
    }
    prev = cur;
  }
  return ExtendedReal::infinity();
}

/// ψ-domain grid for a custom profile: knots at s_i/4 (where ℓ(4x) kinks),
/// each gap subdivided uniformly, starting at `from`.
std::vector<double> custom_grid(const CustomEll& m, double from) {
  std::vector<double> knots{0.0};
  for (const auto& [s, l] : m.points) {
    if (s > 0.0) knots.push_back(s / 4.0);
  }
  std::vector<double> grid;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    for (int k = 0; k < kKnotSubdivisions; ++k) {
      const double x = knots[i] + (knots[i + 1] - knots[i]) * k / kKnotSubdivisions;
      if (x >= from) grid.push_back(x);
    }
  }
  grid.push_back(knots.back());
  if (grid.front() > from) grid.insert(grid.begin(), from);
  return grid;
}

ExtendedReal psi_supremum(const EllModel& model, const ExtendedReal& dmax) {
  if (dmax.is_finite()) return psi_eval(model, dmax.value());
  if (const auto* p = std::get_if<PowerEll>(&model.variant())) {
    if (p->L1 > 0.0 && p->rho == 2.0) return 1.0 / (32.0 * p->L1);
  }
  return ExtendedReal::infinity();
}

}  // namespace

double psi_eval(const EllModel& model, double x) {
  if (!(x >= 0.0)) throw DomainError("psi: argument must be nonnegative");
  if (x == 0.0) return 0.0;
  return x * x / (2.0 * model(4.0 * x));
}

ExtendedReal scan_delta_max(const EllModel& model, double x_end, int points_per_unit_segment) {
  const int n = std::max(2, points_per_unit_segment);
  std::vector<double> grid(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) grid[static_cast<std::size_t>(i)] = x_end * i / n;
  return scan_grid(model, grid);
}

ExtendedReal delta_max(const EllModel& model) {
  const auto& v = model.variant();
  if (const auto* p = std::get_if<PowerEll>(&v)) {
    if (p->rho <= 2.0 || p->L1 == 0.0) return ExtendedReal::infinity();
    return 0.25 * std::pow(2.0 * p->L0 / ((p->rho - 2.0) * p->L1), 1.0 / p->rho);
  }
  if (const auto* c = std::get_if<CustomEll>(&v)) {
    // Beyond the last breakpoint ℓ is constant and ψ grows like x².
    return scan_grid(model, custom_grid(*c, 0.0));
  }
  return ExtendedReal::infinity();
}

PsiProfile::PsiProfile(EllModel model)
    : model_(std::move(model)),
      delta_max_(lsmooth::delta_max(model_)),
      psi_sup_(psi_supremum(model_, delta_max_)) {}

double psi_inverse(const PsiProfile& profile, double t, double tol) {
  if (!(t >= 0.0)) throw DomainError("psi_inverse: argument must be nonnegative");
  if (!(tol > 0.0)) throw DomainError("psi_inverse: tolerance must be positive");
  if (t >= profile.psi_at_delta_max()) {
    throw OutOfRangeError("psi_inverse: t is not below psi(delta_max)");
  }
  if (t == 0.0) return 0.0;
  const double cap = profile.delta_max().to_double();
  const double upper = numeric::grow_bracket(profile, t, cap);
  return numeric::bisect_increasing(profile, t, 0.0, upper, tol);
}

DeltaBranches delta_left_right(const PsiProfile& profile, double delta) {
  if (!(delta >= 0.0)) throw DomainError("delta_left_right: delta must be nonnegative");
  if (delta >= profile.psi_at_delta_max()) {
    throw OutOfRangeError("delta_left_right: delta is not below psi(delta_max)");
  }
  const double left = psi_inverse(profile, delta);
  if (profile.delta_max().is_infinite() || delta == 0.0) {
    return {left, ExtendedReal::infinity()};
  }
  const double dmax = profile.delta_max().value();
  const auto& v = profile.model().variant();
  if (const auto* p = std::get_if<PowerEll>(&v)) {
    // ψ decreases on [Δ_max, ∞) and stays below x^{2−ρ}/(2·L1·4^ρ); the root
    // of that tail expression therefore brackets Δ_right from above.
    const double tail_root =
        std::pow(2.0 * delta * p->L1 * std::pow(4.0, p->rho), 1.0 / (2.0 - p->rho));
    return {left, numeric::bisect_decreasing(profile, delta, dmax, tail_root,
                                             kDefaultInverseTolerance)};
  }
  const auto& custom = std::get<CustomEll>(v);
  const auto grid = custom_grid(custom, dmax);
  for (std::size_t j = 1; j < grid.size(); ++j) {
    if (profile(grid[j]) <= delta) {
      return {left, numeric::bisect_decreasing(profile, delta, grid[j - 1], grid[j],
                                               kDefaultInverseTolerance)};
    }
  }
  return {left, ExtendedReal::infinity()};
}

bool admissible_delta(const EllModel& model, double delta) {
  if (!(delta >= 0.0)) throw DomainError("admissible_delta: delta must be nonnegative");
  const double l0 = model.at_zero();
  if (std::isinf(delta)) return model.is_constant();
  return model(8.0 * std::sqrt(delta * l0)) <= 2.0 * l0;
}

double q_eval(const EllModel& model, double s, double a) {
  if (!(s >= 0.0) || !(a >= 0.0)) throw DomainError("q: arguments must be nonnegative");
  if (s == 0.0) return 0.0;
  const auto& v = model.variant();
  if (const auto* c = std::get_if<ConstantEll>(&v)) return s / c->L;
  if (const auto* m = std::get_if<AffineEll>(&v)) {
    if (m->L1 == 0.0) return s / m->L0;
    return std::log1p(m->L1 * s / (m->L0 + m->L1 * a)) / m->L1;
  }
  const auto inv_ell = [&](double w) { return 1.0 / model(w); };
  if (const auto* p = std::get_if<PowerEll>(&v)) {
    if (p->L1 == 0.0) return s / p->L0;
    return numeric::integrate_geometric(inv_ell, a, a + s);
  }
  // Custom: integrate between breakpoints, the constant tail in closed form.
  const auto& pts = std::get<CustomEll>(v).points;
  double total = 0.0;
  double lo = a;
  const double end = a + s;
  for (const auto& [knot, l] : pts) {
    if (knot <= lo) continue;
    const double hi = std::min(knot, end);
    total += numeric::integrate(inv_ell, lo, hi);
    lo = hi;
    if (lo >= end) return total;
  }
  return total + (end - lo) / pts.back().second;
}

ExtendedReal q_max(const EllModel& model, double a) {
  if (!(a >= 0.0)) throw DomainError("q_max: argument must be nonnegative");
  const auto* p = std::get_if<PowerEll>(&model.variant());
  if (p == nullptr || p->L1 == 0.0 || p->rho <= 1.0) return ExtendedReal::infinity();
  const double cutoff = std::max(a, std::pow(p->L0 / (p->L1 * kTailCutoff), 1.0 / p->rho));
  const double head =
      numeric::integrate_geometric([&](double w) { return 1.0 / model(w); }, a, cutoff);
  const double tail = std::pow(cutoff, 1.0 - p->rho) / ((p->rho - 1.0) * p->L1);
  return head + tail;
}

double q_inverse(const EllModel& model, double r, double a) {
  if (!(r >= 0.0) || !(a >= 0.0)) throw DomainError("q_inverse: arguments must be nonnegative");
  if (r >= q_max(model, a)) throw OutOfRangeError("q_inverse: r is not below q_max(a)");
  if (r == 0.0) return 0.0;
  const auto& v = model.variant();
  if (const auto* c = std::get_if<ConstantEll>(&v)) return r * c->L;
  if (const auto* m = std::get_if<AffineEll>(&v)) {
    if (m->L1 == 0.0) return r * m->L0;
    return (m->L0 + m->L1 * a) / m->L1 * std::expm1(m->L1 * r);
  }
  const auto q = [&](double s) { return q_eval(model, s, a); };
  const double upper = numeric::grow_bracket(q, r);
  return numeric::bisect_increasing(q, r, 0.0, upper, kDefaultInverseTolerance);
}

}  // namespace lsmooth
