#include "lsmooth/numeric.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

namespace lsmooth::numeric {

double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol) {
  if (a == b) return 0.0;
  // tanh-sinh copes with the endpoint cusp of s ↦ s^ρ (ρ < 1) at s = 0, where
  // Gauss-Kronrod bisection keeps refining down to its depth limit.
  thread_local boost::math::quadrature::tanh_sinh<double> integrator;
  double error = 0.0;
  const auto g = [&f](double x) { return f(x); };
  return integrator.integrate(g, a, b, rel_tol, &error);
}

double integrate_geometric(const std::function<double(double)>& f, double a, double b,
                           double rel_tol) {
  double total = 0.0;
  double lo = a;
  double width = 1.0;
  while (lo < b) {
    const double hi = std::min(b, lo + width);
    total += integrate(f, lo, hi, rel_tol);
    lo = hi;
    width *= 2.0;
  }
  return total;
}

}  // namespace lsmooth::numeric
