#include <cmath>

#include "lsmooth/errors.hpp"
#include "lsmooth/solvers.hpp"
#include "solvers/internal.hpp"

namespace lsmooth {

AgdState make_agd_state(const Problem& problem, const Vector& x, double gamma_cap,
                        OracleCounter& oracle) {
  (void)problem;
  return AgdState{x, x, gamma_cap, 0, oracle(x)};
}

AgdState agd_step(const AgdState& state, double step_gamma, const Problem& problem,
                  OracleCounter& oracle) {
  const auto [alpha, next_cap] = gamma_alpha_step(state.gamma_cap, step_gamma);
  Vector y = (state.y + alpha * state.u - step_gamma * state.at_y.gradient) / (1.0 + alpha);
  std::optional<std::size_t> coord;
  if (!problem.domain().contains(y, &coord)) {
    throw SafetyViolation("agd_step: y^{k+1} left the domain at iteration " +
                          std::to_string(state.k) + " (step size too large for the profile)");
  }
  Evaluation at_y = oracle(y);
  Vector u = problem.domain().project_closure(state.u -
                                              (alpha / state.gamma_cap) * at_y.gradient);
  return AgdState{std::move(y), std::move(u), next_cap, state.k + 1, std::move(at_y)};
}

AgdState agd_step(const AgdState& state, double step_gamma, const Problem& problem) {
  OracleCounter oracle(problem);
  return agd_step(state, step_gamma, problem, oracle);
}

namespace detail {

GdLoop gd_loop(const Problem& problem, const EllModel& model, const Vector& x0, double target,
               double r_bar, long max_iterations, OracleCounter& oracle) {
  const auto& opt = problem.optimum();
  GdLoop out;
  Vector x = x0;
  Evaluation ev = oracle(x);
  out.initial_value = ev.value;
  double dist = opt ? (x - opt->point).norm() : 0.0;
  const auto done = [&](const Evaluation& e) {
    if (opt) return e.value - opt->value <= target;
    return e.gradient.norm() * r_bar <= target;
  };
  long t = 0;
  while (!done(ev)) {
    if (t >= max_iterations) {
      out.exhausted = true;
      break;
    }
    const double gnorm = ev.gradient.norm();
    const double gamma = 1.0 / (2.0 * model(2.0 * gnorm));
    Vector next = x - gamma * ev.gradient;
    if (!problem.domain().contains(next)) {
      throw SafetyViolation("gd_run: iterate left the domain at step " + std::to_string(t));
    }
    x = std::move(next);
    ev = oracle(x);
    ++t;
    TraceRecord row{};
    row.k = t;
    row.phase = Phase::gd;
    row.value = ev.value;
    row.grad_norm = ev.gradient.norm();
    row.step_gamma = gamma;
    if (opt) {
      const double d = (x - opt->point).norm();
      if (d > dist * (1.0 + 1e-12) + 1e-15) {
        throw SafetyViolation("gd_run: distance to the optimum increased at step " +
                              std::to_string(t));
      }
      dist = d;
      row.f_gap = ev.value - opt->value;
      row.dist_to_opt = d;
    }
    out.result.trace.push_back(row);
  }
  out.result.x_bar = std::move(x);
  out.result.at_x_bar = std::move(ev);
  out.result.iterations = t;
  return out;
}

}  // namespace detail

GdResult gd_run(const Problem& problem, const EllModel& model, const Vector& x0, double delta,
                double r_bar, long max_iterations, OracleCounter& oracle) {
  if (!(delta > 0.0)) throw PreconditionError("gd_run: delta must be positive");
  if (!(r_bar > 0.0)) throw PreconditionError("gd_run: r_bar must be positive");
  auto loop = detail::gd_loop(problem, model, x0, delta / 2.0, r_bar, max_iterations, oracle);
  if (loop.exhausted) {
    throw BudgetExhausted("gd_run: stopping certificate not reached within " +
                          std::to_string(max_iterations) + " iterations");
  }
  return std::move(loop.result);
}

GdResult gd_run(const Problem& problem, const EllModel& model, const Vector& x0, double delta,
                double r_bar, long max_iterations) {
  OracleCounter oracle(problem);
  return gd_run(problem, model, x0, delta, r_bar, max_iterations, oracle);
}

}  // namespace lsmooth
