#include <cmath>
#include <functional>
#include <limits>

#include "lsmooth/errors.hpp"
#include "lsmooth/solvers.hpp"
#include "solvers/internal.hpp"

namespace lsmooth {

namespace {

constexpr double kCheckTolerance = 1e-9;
constexpr double kUnderflowGamma = 1e-300;

/// What the shared accelerated loop needs to know about its caller.
struct AgdDriver {
  std::function<double(double gamma_cap)> step;
  const PsiProfile* profile = nullptr;  // gradient envelope check when set
  bool warm_region = false;
  bool ball = false;
  bool monotone_step = false;
  double envelope_gamma = 0.0;  // γ in the Γ envelope
};

struct Context {
  const Problem& problem;
  const EllModel& model;
  double r_bar;
  double epsilon;
  long budget;
  const RunOptions& options;
  double scale;  // max(1, |f*|)
};

void raise_if_strict(const Context& ctx, std::uint32_t flags, long k) {
  if (flags != 0 && ctx.options.strict) {
    throw InvariantViolation("invariant violated at iteration " + std::to_string(k) + ": " +
                                 describe_flags(flags),
                             flags);
  }
}

std::uint32_t state_flags(const Context& ctx, const AgdDriver& drv, const AgdState& s) {
  std::uint32_t flags = 0;
  const double gnorm = s.at_y.gradient.norm();
  const double l0 = ctx.model.at_zero();
  if (drv.warm_region && ctx.model(4.0 * gnorm) > 2.0 * l0) flags |= kFlagWarmRegion;
  if (drv.profile != nullptr) {
    const double env = psi_inverse(*drv.profile, s.gamma_cap * ctx.r_bar * ctx.r_bar);
    if (gnorm > env * (1.0 + kCheckTolerance) + 1e-300) flags |= kFlagGradientEnvelope;
  }
  const auto& opt = ctx.problem.optimum();
  if (drv.ball && opt) {
    const double lim = 2.0 * ctx.r_bar * (1.0 + kCheckTolerance);
    if ((s.y - opt->point).norm() > lim || (s.u - opt->point).norm() > lim) {
      flags |= kFlagBallConfinement;
    }
  }
  return flags;
}

bool converged(const Context& ctx, const AgdState& s) {
  if (s.gamma_cap < kUnderflowGamma) return true;
  if ((s.at_y.gradient.array() == 0.0).all()) return true;
  if (const auto& opt = ctx.problem.optimum()) return s.at_y.value - opt->value <= ctx.epsilon;
  return s.gamma_cap * ctx.r_bar * ctx.r_bar <= ctx.epsilon;
}

std::optional<double> lyapunov(const Context& ctx, const AgdState& s) {
  const auto& opt = ctx.problem.optimum();
  if (!opt) return std::nullopt;
  return s.at_y.value - opt->value + 0.5 * s.gamma_cap * (s.u - opt->point).squaredNorm();
}

/// Accelerated iterations from `start` (already evaluated), appending to `out`.
void run_agd(const Context& ctx, const AgdDriver& drv, AgdState start, OracleCounter& oracle,
             RunResult& out) {
  const auto& opt = ctx.problem.optimum();
  const double r2 = ctx.r_bar * ctx.r_bar;
  const double gamma_cap0 = start.gamma_cap;
  const double k_bar = kbar(gamma_cap0, drv.envelope_gamma);
  const double tol = kCheckTolerance * ctx.scale;

  const std::uint32_t initial = state_flags(ctx, drv, start);
  out.flags |= initial;
  raise_if_strict(ctx, initial, 0);

  AgdState s = std::move(start);
  double prev_step = 0.0;
  while (true) {
    if (converged(ctx, s)) {
      out.reason = Termination::converged;
      break;
    }
    if (oracle.calls() >= ctx.budget) {
      out.reason = Termination::budget;
      break;
    }
    std::uint32_t flags = 0;
    const double gamma = drv.step(s.gamma_cap);
    const double gnorm = s.at_y.gradient.norm();
    if (gamma > (1.0 + 1e-12) / ctx.model(2.0 * gnorm)) flags |= kFlagStepSafety;
    if (drv.monotone_step && gamma < prev_step * (1.0 - 1e-12)) flags |= kFlagStepMonotone;
    prev_step = gamma;

    const auto v_prev = lyapunov(ctx, s);
    const double alpha = gamma_alpha_step(s.gamma_cap, gamma).alpha;
    AgdState next = agd_step(s, gamma, ctx.problem, oracle);

    flags |= state_flags(ctx, drv, next);
    const auto v_next = lyapunov(ctx, next);
    if (opt) {
      if (next.at_y.value - opt->value > next.gamma_cap * r2 + tol) flags |= kFlagCertifiedGap;
      if (*v_next > *v_prev / (1.0 + alpha) + tol) flags |= kFlagLyapunov;
    }
    if (static_cast<double>(s.k) >= k_bar) {
      const double env = gamma_envelope(s.k, drv.envelope_gamma, k_bar);
      if (next.gamma_cap > env * (1.0 + 4.0 * std::numeric_limits<double>::epsilon())) {
        flags |= kFlagGammaEnvelope;
      }
    }

    TraceRecord row{};
    row.k = next.k;
    row.phase = Phase::agd;
    row.value = next.at_y.value;
    row.grad_norm = next.at_y.gradient.norm();
    row.gamma_cap = next.gamma_cap;
    row.alpha = alpha;
    row.step_gamma = gamma;
    row.bound_gap = next.gamma_cap * r2;
    row.lyapunov = v_next;
    if (opt) {
      row.f_gap = next.at_y.value - opt->value;
      row.dist_to_opt = (next.y - opt->point).norm();
    }
    row.flags = flags;
    out.trace.push_back(row);
    out.flags |= flags;
    ++out.agd_iters;
    s = std::move(next);
    raise_if_strict(ctx, flags, s.k);
  }
  out.certified_bound = s.gamma_cap * r2;
  out.final_state = std::move(s);
}

void finish(const Context& ctx, OracleCounter& oracle, RunResult& out) {
  out.oracle_calls = oracle.calls();
  if (const auto& opt = ctx.problem.optimum()) {
    out.achieved_gap = out.final_state.at_y.value - opt->value;
  } else if (out.reason == Termination::converged) {
    out.achieved_gap = out.certified_bound;
  }
}

RunResult precondition_failed(std::string message) {
  RunResult r;
  r.reason = Termination::precondition_failed;
  r.message = std::move(message);
  return r;
}

Context make_context(const Problem& problem, const EllModel& model, double r_bar, double epsilon,
                     long budget, const RunOptions& options) {
  if (!(epsilon > 0.0)) throw ConfigurationError("must be positive", "epsilon");
  if (budget < 1) throw ConfigurationError("must be at least 1", "budget");
  if (!(r_bar > 0.0)) throw ConfigurationError("must be positive", "r_bar");
  const auto& opt = problem.optimum();
  return Context{problem, model,   r_bar,
                 epsilon, budget,  options,
                 opt ? std::max(1.0, std::abs(opt->value)) : 1.0};
}

std::optional<std::string> check_r_bar(const Problem& problem, const Vector& x0, double r_bar) {
  const auto& opt = problem.optimum();
  if (opt && (x0 - opt->point).norm() > r_bar) {
    return "r_bar = " + std::to_string(r_bar) + " is below ||x0 - x*|| = " +
           std::to_string((x0 - opt->point).norm());
  }
  return std::nullopt;
}

}  // namespace

RunResult algorithm1_run(const Problem& problem, const EllModel& model, const Vector& x0,
                         ExtendedReal delta, double r_bar, double epsilon, long budget,
                         const RunOptions& options) {
  const Context ctx = make_context(problem, model, r_bar, epsilon, budget, options);
  if (auto msg = check_r_bar(problem, x0, r_bar)) return precondition_failed(*msg);
  const double r2 = r_bar * r_bar;

  bool skip_gd = false;
  double d = 0.0;
  const PsiProfile profile(model);
  const bool superquadratic = profile.delta_max().is_finite();
  if (delta.is_infinite()) {
    if (!model.is_constant()) {
      return precondition_failed("unbounded delta is only admissible for a constant profile");
    }
    // f(x0) − f* ≤ (ℓ(0)/2)·R̄², so the warm start is already met.
    d = model.at_zero() * r2;
    skip_gd = true;
  } else {
    d = delta.value();
    if (!(d > 0.0)) return precondition_failed("delta must be positive");
    if (superquadratic) {
      if (!options.m_bar) return precondition_failed("m_bar is required for this profile");
      if (!in_superquadratic_set(profile, d, *options.m_bar)) {
        return precondition_failed("delta = " + std::to_string(d) +
                                   " is outside the admissible set for the given m_bar");
      }
    } else if (!admissible_delta(model, d)) {
      return precondition_failed("delta = " + std::to_string(d) + " is not admissible");
    }
  }

  RunResult out;
  out.delta = d;
  out.gamma_cap0 = d / r2;
  OracleCounter oracle(problem);
  AgdState start;
  if (skip_gd) {
    start = make_agd_state(problem, x0, out.gamma_cap0, oracle);
    out.initial_value = start.at_y.value;
  } else {
    auto loop = detail::gd_loop(problem, model, x0, d / 2.0, r_bar, budget - 1, oracle);
    out.gd_iters = loop.result.iterations;
    out.trace = std::move(loop.result.trace);
    out.initial_value = loop.initial_value;
    start = AgdState{loop.result.x_bar, loop.result.x_bar, out.gamma_cap0, 0,
                     std::move(loop.result.at_x_bar)};
    if (loop.exhausted) {
      out.reason = Termination::budget;
      out.message = "budget exhausted in the GD phase";
      out.certified_bound = out.gamma_cap0 * r2;
      out.final_state = std::move(start);
      finish(ctx, oracle, out);
      return out;
    }
  }

  AgdDriver drv;
  const double gamma = 1.0 / (2.0 * model.at_zero());
  drv.step = [gamma](double) { return gamma; };
  drv.warm_region = true;
  drv.ball = superquadratic;
  drv.envelope_gamma = gamma;
  run_agd(ctx, drv, std::move(start), oracle, out);
  finish(ctx, oracle, out);
  return out;
}

RunResult algorithm2_run(const Problem& problem, const EllModel& model, const Vector& x0,
                         double gamma_cap0, double r_bar, double epsilon, long budget,
                         const RunOptions& options) {
  const Context ctx = make_context(problem, model, r_bar, epsilon, budget, options);
  if (!(gamma_cap0 > 0.0)) throw ConfigurationError("must be positive", "gamma_cap0");
  const PsiProfile profile(model);
  if (!profile.invertible_on_half_line()) {
    throw ConfigurationError("psi is not invertible on the half line for this profile",
                             "model");
  }
  if (auto msg = check_r_bar(problem, x0, r_bar)) return precondition_failed(*msg);

  RunResult out;
  out.gamma_cap0 = gamma_cap0;
  OracleCounter oracle(problem);
  AgdState start = make_agd_state(problem, x0, gamma_cap0, oracle);
  out.initial_value = start.at_y.value;
  if (const auto& opt = problem.optimum()) {
    const double dist2 = (x0 - opt->point).squaredNorm();
    if (dist2 > 0.0 && gamma_cap0 < 2.0 * (start.at_y.value - opt->value) / dist2) {
      out.warnings.push_back("gamma_cap0 is below 2(f(x0) - f*)/||x0 - x*||^2");
    }
  }

  const double r2 = r_bar * r_bar;
  AgdDriver drv;
  drv.step = [&](double cap) { return 1.0 / model(4.0 * psi_inverse(profile, cap * r2)); };
  drv.profile = &profile;
  drv.monotone_step = true;
  drv.envelope_gamma = drv.step(gamma_cap0);
  run_agd(ctx, drv, std::move(start), oracle, out);
  finish(ctx, oracle, out);
  return out;
}

RunResult gd_only_run(const Problem& problem, const EllModel& model, const Vector& x0,
                      double r_bar, double epsilon, long budget) {
  const RunOptions options;
  const Context ctx = make_context(problem, model, r_bar, epsilon, budget, options);
  if (auto msg = check_r_bar(problem, x0, r_bar)) return precondition_failed(*msg);
  OracleCounter oracle(problem);
  auto loop = detail::gd_loop(problem, model, x0, epsilon, r_bar, budget - 1, oracle);
  RunResult out;
  out.gd_iters = loop.result.iterations;
  out.initial_value = loop.initial_value;
  out.trace = std::move(loop.result.trace);
  out.reason = loop.exhausted ? Termination::budget : Termination::converged;
  out.final_state = AgdState{loop.result.x_bar, loop.result.x_bar, 0.0, 0,
                             std::move(loop.result.at_x_bar)};
  finish(ctx, oracle, out);
  if (!problem.optimum() && out.reason == Termination::converged) {
    out.achieved_gap = out.final_state.at_y.gradient.norm() * r_bar;
  }
  return out;
}

}  // namespace lsmooth
