#include <algorithm>
#include <functional>
#include <cmath>
#include <limits>
#include <random>

#include "lsmooth/errors.hpp"
#include "lsmooth/numeric.hpp"
#include "lsmooth/solvers.hpp"

namespace lsmooth {

namespace {

/// Largest δ ≤ cap satisfying a predicate that holds near 0 and fails past
/// some threshold.
double shrink_to(const std::function<bool(double)>& pred, double cap) {
  if (pred(cap)) return cap;
  return numeric::bisect_predicate(pred, 0.0, cap).first;
}

double admissible_cap(const EllModel& model, double cap) {
  return shrink_to([&](double d) { return admissible_delta(model, d); }, cap);
}

double q_set_cap(const PsiProfile& profile, double cap, double m_bar) {
  return shrink_to([&](double d) { return in_superquadratic_set(profile, d, m_bar); }, cap);
}

}  // namespace

bool in_superquadratic_set(const PsiProfile& profile, double delta, double m_bar) {
  if (!(delta > 0.0)) return false;
  if (!(delta <= 0.5 * profile.psi_at_delta_max().to_double())) return false;
  const auto [left, right] = delta_left_right(profile, delta);
  const auto& model = profile.model();
  return model(4.0 * left) <= 2.0 * model.at_zero() && right >= 2.0 * m_bar;
}

ExtendedReal select_delta(const EllModel& model, double r_bar, std::optional<double> m_bar) {
  if (!(r_bar > 0.0)) throw ConfigurationError("must be positive", "r_bar");
  if (m_bar && !(*m_bar >= 0.0)) throw ConfigurationError("must be nonnegative", "m_bar");
  if (model.is_constant()) return ExtendedReal::infinity();
  const double r2 = r_bar * r_bar;
  const auto& v = model.variant();
  if (const auto* a = std::get_if<AffineEll>(&v)) {
    const double d = std::min(a->L0 / (64.0 * a->L1 * a->L1), a->L0 * r2 / 64.0);
    return admissible_cap(model, d);
  }
  if (const auto* p = std::get_if<PowerEll>(&v)) {
    const double first = std::pow(p->L0, 2.0 / p->rho - 1.0) / std::pow(p->L1, 2.0 / p->rho);
    if (p->rho <= 2.0) {
      return admissible_cap(model, std::min(first, p->L0 * r2) / 64.0);
    }
    if (!m_bar) {
      throw ConfigurationError("required for power models with rho > 2", "m_bar");
    }
    const double third = *m_bar > 0.0
                             ? std::pow(1.0 / (2.0 * *m_bar), p->rho - 2.0) / p->L1
                             : std::numeric_limits<double>::infinity();
    const double d_bar =
        std::min({first, p->L0 / (p->L1 * p->L1), third, p->L0 * r2});
    const PsiProfile profile(model);
    return q_set_cap(profile, std::min(d_bar, 0.5 * profile.psi_at_delta_max().to_double()), *m_bar);
  }
  // Custom profile: subquadratic shape uses the admissibility threshold,
  // otherwise the Q set.
  const PsiProfile profile(model);
  const double l0r2 = model.at_zero() * r2 / 64.0;
  if (profile.delta_max().is_infinite()) return admissible_cap(model, l0r2);
  if (!m_bar) {
    throw ConfigurationError("required when psi is not monotone", "m_bar");
  }
  return q_set_cap(profile, std::min(l0r2, 0.5 * profile.psi_at_delta_max().to_double()), *m_bar);
}

double estimate_m_bar(const Problem& problem, double r_bar, int samples, std::uint64_t seed,
                      double safety) {
  const auto& opt = problem.optimum();
  if (!opt) throw PreconditionError("estimate_m_bar: requires a known optimum");
  if (!(r_bar > 0.0) || samples < 1) {
    throw PreconditionError("estimate_m_bar: r_bar and samples must be positive");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit;
  const auto d = static_cast<Eigen::Index>(problem.dimension());
  double best = 0.0;
  int valid = 0;
  for (int i = 0; i < samples; ++i) {
    Vector dir(d);
    for (Eigen::Index j = 0; j < d; ++j) dir[j] = normal(rng);
    const double n = dir.norm();
    if (n == 0.0) continue;
    // Even samples on the sphere, odd ones uniform in the ball.
    const double radius =
        2.0 * r_bar * (i % 2 == 0 ? 1.0 : std::pow(unit(rng), 1.0 / static_cast<double>(d)));
    const Vector x = opt->point + (radius / n) * dir;
    if (!problem.domain().contains(x)) continue;
    best = std::max(best, problem.evaluate(x).gradient.norm());
    ++valid;
  }
  if (valid == 0) throw PreconditionError("estimate_m_bar: no sample landed in the domain");
  return safety * best;
}

long compute_k_init(const PsiProfile& profile, double gamma_cap0, double r_bar) {
  const auto& model = profile.model();
  const double l0 = model.at_zero();
  const double r2 = r_bar * r_bar;
  const double top = model(4.0 * psi_inverse(profile, gamma_cap0 * r2));
  const auto ok = [&](long k) {
    const double kk = static_cast<double>(k);
    return model(24.0 * std::sqrt(top * l0 * r2 / (kk * kk))) <= 2.0 * l0;
  };
  constexpr long kCap = 1L << 52;
  long hi = 1;
  while (!ok(hi)) {
    if (hi >= kCap) return kCap;
    hi *= 2;
  }
  long lo = hi / 2;  // ok(lo) false unless lo == 0
  while (hi - lo > 1) {
    const long mid = lo + (hi - lo) / 2;
    (ok(mid) ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace lsmooth
