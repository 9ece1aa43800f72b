#pragma once

#include <cmath>
#include <functional>
#include <utility>

namespace lsmooth::numeric {

inline constexpr int kMaxBisectionIterations = 200;
inline constexpr double kBracketGrowth = 2.0;
inline constexpr double kQuadratureTolerance = 1e-10;

/// Narrows [lo, hi] around the switch point of a monotone predicate with
/// pred(lo) == true and pred(hi) == false. Stops after `max_iterations`
/// halvings or when the bracket can no longer be split in floating point.
template <class Predicate>
std::pair<double, double> bisect_predicate(Predicate&& pred, double lo, double hi,
                                           int max_iterations = kMaxBisectionIterations) {
  for (int i = 0; i < max_iterations; ++i) {
    const double mid = lo + 0.5 * (hi - lo);
    if (!(mid > lo && mid < hi)) break;
    if (pred(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {lo, hi};
}

/// Root of f(x) = target for f non-decreasing on [lo, hi] with
/// f(lo) ≤ target ≤ f(hi). Returns as soon as |f(x) − target| ≤ rel_tol·|target|,
/// otherwise the midpoint of the collapsed bracket.
template <class F>
double bisect_increasing(F&& f, double target, double lo, double hi, double rel_tol,
                         int max_iterations = kMaxBisectionIterations) {
  for (int i = 0; i < max_iterations; ++i) {
    const double mid = lo + 0.5 * (hi - lo);
    if (!(mid > lo && mid < hi)) break;
    const double value = f(mid);
    if (std::abs(value - target) <= rel_tol * std::abs(target)) return mid;
    if (value < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo + 0.5 * (hi - lo);
}

/// Root of f(x) = target for f non-increasing on [lo, hi].
template <class F>
double bisect_decreasing(F&& f, double target, double lo, double hi, double rel_tol,
                         int max_iterations = kMaxBisectionIterations) {
  return bisect_increasing([&](double x) { return -f(x); }, -target, lo, hi, rel_tol,
                           max_iterations);
}

/// Grows an upper bracket geometrically from 1 until f(upper) ≥ target or
/// upper reaches `cap`. Returns the final upper end (≤ cap).
template <class F>
double grow_bracket(F&& f, double target, double cap = HUGE_VAL) {
  double upper = 1.0;
  for (int i = 0; i < kMaxBisectionIterations; ++i) {
    if (upper >= cap) return cap;
    if (f(upper) >= target) return upper;
    upper *= kBracketGrowth;
  }
  return upper;
}

/// Adaptive Gauss–Kronrod (7/15) integral of f over the finite interval [a, b].
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = kQuadratureTolerance);

/// Integral over [a, b] split into geometrically growing pieces starting at
/// a with width 1, so that integrands concentrated near `a` on long intervals
/// are resolved.
double integrate_geometric(const std::function<double(double)>& f, double a, double b,
                           double rel_tol = kQuadratureTolerance);

}  // namespace lsmooth::numeric
