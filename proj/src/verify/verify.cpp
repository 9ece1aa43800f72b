#include "lsmooth/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "lsmooth/errors.hpp"
#include "lsmooth/numeric.hpp"

namespace lsmooth {

namespace {

// Relative slack on the gradient bounds of check_gap_to_grad; covers the
// bisection error of ψ⁻¹ and Δ_left/Δ_right at boundary-tight points.
constexpr double kBranchTolerance = 1e-9;

nlohmann::json to_json_vector(const Vector& v) {
  return nlohmann::json(std::vector<double>(v.data(), v.data() + v.size()));
}

class Sampler {
 public:
  Sampler(const Problem& problem, std::uint64_t seed)
      : box_(problem.sample_region()), rng_(seed) {}

  Vector point() {
    Vector x(box_.lower.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      x[i] = box_.lower[i] + (box_.upper[i] - box_.lower[i]) * unit_(rng_);
    }
    return x;
  }
  double unit() { return unit_(rng_); }
  double log_uniform(double lo, double hi) {
    return std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * unit_(rng_));
  }

 private:
  Box box_;
  std::mt19937_64 rng_;
  std::uniform_real_distribution<double> unit_;
};

void record(CheckReport& report, double normalized, const nlohmann::json& witness) {
  ++report.trials;
  if (normalized < -report.tolerance) ++report.violations;
  if (report.trials == 1 || normalized < report.worst_margin) {
    report.worst_margin = normalized;
    report.witness = witness;
  }
}

CheckReport make_report(std::string name, const SweepOptions& options, double tolerance) {
  CheckReport r;
  r.name = std::move(name);
  r.seed = options.seed;
  r.tolerance = tolerance;
  return r;
}

double gap_to_grad_margin(const Problem& problem, const PsiProfile& profile, const Vector& y,
                          double delta) {
  if (!(delta >= 0.0) || !(delta < profile.psi_at_delta_max())) {
    throw PreconditionError("check_gap_to_grad: delta must lie in [0, psi(delta_max))");
  }
  const double g = problem.evaluate(y).gradient.norm();
  const auto [left, right] = delta_left_right(profile, delta);
  const double low = (left - g) / std::max(1.0, left);
  if (right.is_infinite()) return low;
  const double high = (g - right.value()) / std::max(1.0, right.value());
  return std::max(low, high);
}

}  // namespace

double check_convexity_smoothness(const Problem& problem, const EllModel& model, const Vector& x,
                                  const Vector& y) {
  const Evaluation ex = problem.evaluate(x);
  const Evaluation ey = problem.evaluate(y);
  const double rhs = ex.value - ey.value - ey.gradient.dot(x - y);
  const double a = ex.gradient.norm();
  const double b = (ex.gradient - ey.gradient).norm();
  if (b == 0.0) return rhs;
  const double integral = numeric::integrate(
      [&](double v) { return (1.0 - v) / model(a + b * v); }, 0.0, 1.0,
      kVerifyQuadratureTolerance);
  return rhs - b * b * integral;
}

double check_convexity_smoothness(const Problem& problem, const Vector& x, const Vector& y) {
  return check_convexity_smoothness(problem, problem.ell_model(), x, y);
}

double check_gradient_transfer(const Problem& problem, const EllModel& model, const Vector& x,
                               const Vector& y) {
  const Evaluation ex = problem.evaluate(x);
  const Evaluation ey = problem.evaluate(y);
  const double r = (y - x).norm();
  const double a = ex.gradient.norm();
  if (!(r < q_max(model, a))) {
    throw PreconditionError("check_gradient_transfer: ||y - x|| is not below q_max");
  }
  return q_inverse(model, r, a) - (ey.gradient - ex.gradient).norm();
}

double check_gradient_transfer(const Problem& problem, const Vector& x, const Vector& y) {
  return check_gradient_transfer(problem, problem.ell_model(), x, y);
}

double check_descent_step(const Problem& problem, const EllModel& model, const AgdState& state,
                          double step_gamma) {
  const auto& opt = problem.optimum();
  if (!opt) throw PreconditionError("check_descent_step: requires a known optimum");
  const double gk = state.at_y.gradient.norm();
  if (!(step_gamma >= 0.0) || step_gamma > (1.0 + 1e-12) / model(2.0 * gk)) {
    throw PreconditionError("check_descent_step: step size exceeds 1/l(2||grad f(y)||)");
  }
  const AgdState next = agd_step(state, step_gamma, problem);
  const double alpha = gamma_alpha_step(state.gamma_cap, step_gamma).alpha;
  const double v_k =
      state.at_y.value - opt->value + 0.5 * state.gamma_cap * (state.u - opt->point).squaredNorm();
  const double lhs = (1.0 + alpha) * (next.at_y.value - opt->value) +
                     0.5 * (1.0 + alpha) * next.gamma_cap * (next.u - opt->point).squaredNorm() -
                     v_k;
  const double gk1 = next.at_y.gradient.norm();
  const double dg2 = (next.at_y.gradient - state.at_y.gradient).squaredNorm();
  const double rhs = 0.5 * (step_gamma - 1.0 / model(2.0 * gk + gk1)) * dg2;
  return rhs - lhs;
}

double descent_scale(const Problem& problem, const AgdState& state) {
  const auto& opt = problem.optimum();
  if (!opt) return 1.0;
  const double v_k =
      state.at_y.value - opt->value + 0.5 * state.gamma_cap * (state.u - opt->point).squaredNorm();
  return std::max({1.0, std::abs(opt->value), std::abs(state.at_y.value), v_k});
}

bool check_gap_to_grad(const Problem& problem, const PsiProfile& profile, const Vector& y,
                       double delta) {
  return gap_to_grad_margin(problem, profile, y, delta) >= -kBranchTolerance;
}

nlohmann::json CheckReport::to_json() const {
  return {{"name", name},
          {"trials", trials},
          {"skipped", skipped},
          {"violations", violations},
          {"worst_margin", worst_margin},
          {"witness", witness},
          {"seed", seed},
          {"quadrature_tolerance", quadrature_tolerance},
          {"tolerance", tolerance},
          {"passed", passed()}};
}

CheckReport sweep_convexity_smoothness(const Problem& problem, const EllModel& model,
                                       const SweepOptions& options) {
  auto report = make_report("convexity_smoothness", options, kVerifyMarginTolerance);
  Sampler s(problem, options.seed);
  for (long t = 0; t < options.trials; ++t) {
    const Vector x = s.point();
    const Vector y = s.point();
    const double scale = std::max(
        {1.0, std::abs(problem.evaluate(x).value), std::abs(problem.evaluate(y).value)});
    const double m = check_convexity_smoothness(problem, model, x, y) / scale;
    record(report, m, {{"x", to_json_vector(x)}, {"y", to_json_vector(y)}, {"margin", m}});
  }
  return report;
}

CheckReport sweep_gradient_transfer(const Problem& problem, const EllModel& model,
                                    const SweepOptions& options) {
  auto report = make_report("gradient_transfer", options, kVerifyMarginTolerance);
  Sampler s(problem, options.seed);
  for (long t = 0; t < options.trials; ++t) {
    const Vector x = s.point();
    Vector y = s.point();
    const double limit = 0.9 * q_max(model, problem.evaluate(x).gradient.norm()).to_double();
    const double r = (y - x).norm();
    if (r > limit) y = x + (limit / r) * (y - x);
    const double scale = std::max(1.0, problem.evaluate(y).gradient.norm());
    const double m = check_gradient_transfer(problem, model, x, y) / scale;
    record(report, m, {{"x", to_json_vector(x)}, {"y", to_json_vector(y)}, {"margin", m}});
  }
  return report;
}

CheckReport sweep_descent_step(const Problem& problem, const EllModel& model,
                               const SweepOptions& options) {
  auto report = make_report("descent_step", options, 1e-9);
  if (!problem.optimum()) throw PreconditionError("sweep_descent_step: requires a known optimum");
  Sampler s(problem, options.seed);
  for (long t = 0; t < options.trials; ++t) {
    const Vector y = s.point();
    const Vector u = s.point();
    const double cap = s.log_uniform(1e-3, 1e3);
    AgdState state{y, u, cap, 0, problem.evaluate(y)};
    const double gamma = std::max(s.unit(), 1e-3) / model(2.0 * state.at_y.gradient.norm());
    const nlohmann::json witness{{"y", to_json_vector(y)},
                                 {"u", to_json_vector(u)},
                                 {"gamma_cap", cap},
                                 {"step_gamma", gamma}};
    double m = 0.0;
    try {
      m = check_descent_step(problem, model, state, gamma) / descent_scale(problem, state);
    } catch (const SafetyViolation&) {
      m = -std::numeric_limits<double>::infinity();
    }
    auto w = witness;
    w["margin"] = m;
    record(report, m, w);
  }
  return report;
}

CheckReport sweep_gap_to_grad(const Problem& problem, const EllModel& model,
                              const SweepOptions& options) {
  auto report = make_report("gap_to_grad", options, kBranchTolerance);
  const auto& opt = problem.optimum();
  if (!opt) throw PreconditionError("sweep_gap_to_grad: requires a known optimum");
  const PsiProfile profile(model);
  Sampler s(problem, options.seed);
  for (long t = 0; t < options.trials; ++t) {
    // Mix of raw samples and points pulled toward x* so small gaps are covered.
    const double shrink = t % 2 == 0 ? 1.0 : s.log_uniform(1e-4, 1.0);
    const Vector y = opt->point + shrink * (s.point() - opt->point);
    if (!problem.domain().contains(y)) {
      ++report.skipped;
      continue;
    }
    const double delta = std::max(0.0, problem.evaluate(y).value - opt->value);
    if (!(delta < profile.psi_at_delta_max())) {
      ++report.skipped;
      continue;
    }
    const double m = gap_to_grad_margin(problem, profile, y, delta);
    record(report, m, {{"y", to_json_vector(y)}, {"delta", delta}, {"margin", m}});
  }
  return report;
}

std::vector<CheckReport> verify_all(const Problem& problem, const EllModel& model,
                                    const SweepOptions& options) {
  std::vector<CheckReport> out;
  out.push_back(sweep_convexity_smoothness(problem, model, options));
  out.push_back(sweep_gradient_transfer(problem, model, options));
  if (problem.optimum()) {
    out.push_back(sweep_descent_step(problem, model, options));
    out.push_back(sweep_gap_to_grad(problem, model, options));
  }
  return out;
}

}  // namespace lsmooth
