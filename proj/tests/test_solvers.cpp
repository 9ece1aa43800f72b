#include <doctest.h>

#include <cmath>

#include "lsmooth/errors.hpp"
#include "lsmooth/solvers.hpp"

using namespace lsmooth;
using doctest::Approx;

namespace {

Vector scalar(double v) { return Vector::Constant(1, v); }

/// ½x² in one dimension with no known optimum.
Problem blind_quadratic() {
  auto oracle = [](const Vector& x) { return Evaluation{0.5 * x.squaredNorm(), x}; };
  return Problem("blind", 1, oracle, Domain::full_space(), EllModel::constant(1), std::nullopt,
                 Box{scalar(-1), scalar(1)});
}

long rows(const RunResult& r, Phase phase) {
  long n = 0;
  for (const auto& t : r.trace) n += t.phase == phase ? 1 : 0;
  return n;
}

}  // namespace

TEST_CASE("gamma_alpha_step") {
  auto s = gamma_alpha_step(4, 1);
  CHECK(s.alpha == 2.0);
  CHECK(s.next_gamma_cap == Approx(4.0 / 3.0).epsilon(1e-15));
  s = gamma_alpha_step(3.5, 0);
  CHECK(s.alpha == 0.0);
  CHECK(s.next_gamma_cap == 3.5);
  s = gamma_alpha_step(1, 0.25);
  CHECK(s.alpha == 0.5);
  CHECK(s.next_gamma_cap == Approx(2.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("kbar and the Gamma envelope") {
  CHECK(kbar(1, 0.25) == 0.0);
  CHECK(kbar(4, 1) == Approx(1.0).epsilon(1e-15));
  CHECK(kbar(36, 1) == Approx(1.0 + 0.5 * std::log(9.0) / std::log(1.5)).epsilon(1e-14));
  CHECK(kbar(36, 1) == Approx(3.7095).epsilon(1e-4));
  CHECK(gamma_envelope(9, 1, 0) == Approx(0.09).epsilon(1e-15));
  CHECK(gamma_envelope(0, 4, 0) == Approx(2.25).epsilon(1e-15));
  CHECK_THROWS_AS(gamma_envelope(3, 1, 3.71), PreconditionError);
}

TEST_CASE("agd_step") {
  const auto q = catalog("quadratic", {{"d", 1}});
  OracleCounter oracle(q);

  SUBCASE("fixed point at the optimum") {
    const AgdState s = make_agd_state(q, scalar(0), 3.0, oracle);
    const AgdState n = agd_step(s, 0.5, q, oracle);
    CHECK(n.y[0] == 0.0);
    CHECK(n.u[0] == 0.0);
    CHECK(n.k == 1);
  }
  SUBCASE("hand-computed step on half x squared") {
    const AgdState s = make_agd_state(q, scalar(1), 1.0, oracle);
    const AgdState n = agd_step(s, 1.0, q, oracle);
    CHECK(n.y[0] == Approx(0.5).epsilon(1e-15));
    CHECK(n.u[0] == Approx(0.5).epsilon(1e-15));
    CHECK(n.gamma_cap == Approx(0.5).epsilon(1e-15));
    CHECK(n.at_y.gradient[0] == Approx(0.5).epsilon(1e-15));
    CHECK(oracle.calls() == 2);
  }
  SUBCASE("orthant projection clamps u") {
    const auto b = catalog("neg-log-barrier", {{"c", 1}, {"d", 1}});
    OracleCounter ob(b);
    const AgdState s = make_agd_state(b, scalar(2), 1e-3, ob);
    const AgdState n = agd_step(s, 0.01, b, ob);
    CHECK(n.u[0] == 0.0);
    CHECK(n.y[0] > 0.0);
  }
  SUBCASE("leaving the domain is a safety violation") {
    const auto b = catalog("neg-log-barrier", {{"c", 1}, {"d", 1}});
    OracleCounter ob(b);
    const AgdState s = make_agd_state(b, scalar(10), 1e-3, ob);  // ∇f = 9.9
    CHECK_THROWS_AS(agd_step(s, 2.0, b, ob), SafetyViolation);
  }
}

TEST_CASE("gd_run") {
  const auto q = catalog("quadratic", {{"d", 1}});
  const auto model = EllModel::constant(1);
  const auto r = gd_run(q, model, scalar(1), 0.01, 1, 100);
  CHECK(r.iterations == 4);
  CHECK(r.x_bar[0] == 1.0 / 16.0);
  CHECK(r.trace.size() == 4);
  CHECK(*r.trace.back().f_gap == Approx(std::pow(2.0, -9)).epsilon(1e-15));

  const auto zero = gd_run(q, model, scalar(0.05), 0.01, 1, 100);
  CHECK(zero.iterations == 0);
  CHECK(zero.x_bar[0] == 0.05);

  CHECK_THROWS_AS(gd_run(q, model, scalar(1), 0.01, 1, 2), BudgetExhausted);

  // Without f* the certificate |∇f|·R̄ ≤ δ/2 needs x ≤ 0.005, i.e. 8 halvings.
  const auto blind = gd_run(blind_quadratic(), model, scalar(1), 0.01, 1, 100);
  CHECK(blind.iterations == 8);
}

TEST_CASE("select_delta") {
  CHECK(select_delta(EllModel::affine(1, 1), 1).value() == Approx(1.0 / 64.0).epsilon(1e-14));
  CHECK(admissible_delta(EllModel::affine(1, 1), select_delta(EllModel::affine(1, 1), 1).value()));
  CHECK(select_delta(EllModel::affine(1, 1), 0.5).value() == Approx(0.25 / 64.0).epsilon(1e-14));
  CHECK(select_delta(EllModel::constant(3), 1).is_infinite());
  CHECK(select_delta(EllModel::power(2, 3, 1), 1).value() == Approx(1.0 / 64.0).epsilon(1e-12));
  CHECK(select_delta(EllModel::power(1, 2, 3), 10).value() ==
        Approx(2.0 / 9.0 / 64.0).epsilon(1e-12));
  CHECK_THROWS_AS(select_delta(EllModel::power(3, 1, 1), 1), ConfigurationError);

  // δ̄ = min{1, 1, 1/2, 1} = 1/2 is then clipped into Q; the binding
  // condition is Δ_right(δ) ≥ 2M = 2, i.e. δ ≤ ψ(2) = 4/(2·(1 + 8³)).
  const double d = select_delta(EllModel::power(3, 1, 1), 1, 1.0).value();
  CHECK(d == Approx(2.0 / 513.0).epsilon(1e-10));
  const PsiProfile p(EllModel::power(3, 1, 1));
  CHECK(in_superquadratic_set(p, d, 1.0));
  CHECK_FALSE(in_superquadratic_set(p, d * 1.001, 1.0));
}

TEST_CASE("estimate_m_bar and k_init") {
  const auto q = catalog("quadratic", {{"d", 3}});
  CHECK(estimate_m_bar(q, 1.5) == Approx(2.0 * 3.0).epsilon(1e-12));

  // Affine: L1·24·√(top·L0)·R̄/k ≤ L0  ⇔  k ≥ 24·L1·√(top·L0)·R̄/L0.
  const auto m = EllModel::affine(2, 0.5);
  const PsiProfile p(m);
  const double t = 3.0 * 4.0;
  const double psi_inv = 4 * 0.5 * t + std::sqrt(16 * 0.25 * t * t + 2 * 2 * t);
  const double top = 2 + 0.5 * 4 * psi_inv;
  const long expected = static_cast<long>(std::ceil(24 * 0.5 * std::sqrt(top * 2) * 2 / 2));
  CHECK(compute_k_init(p, 3.0, 2.0) == expected);
}

TEST_CASE("algorithm1_run") {
  SUBCASE("exp-experiment with the selected delta") {
    const auto p = catalog("exp-experiment");
    Vector x0(2);
    x0 << -6, -5;
    const auto r = algorithm1_run(p, p.ell_model(), x0, select_delta(p.ell_model(), 100), 100,
                                  1e-6, 20000);
    CHECK(r.reason == Termination::converged);
    CHECK(*r.achieved_gap <= 1e-6);
    CHECK(r.flags == 0);
    CHECK(r.gd_iters > 0);
    CHECK(r.oracle_calls == r.gd_iters + r.agd_iters + 1);
    CHECK(rows(r, Phase::gd) == r.gd_iters);
    CHECK(rows(r, Phase::agd) == r.agd_iters);
  }
  SUBCASE("epsilon above the initial gap") {
    const auto p = catalog("exp-1d");
    const auto r =
        algorithm1_run(p, p.ell_model(), scalar(0.1), select_delta(p.ell_model(), 1), 1, 1.0, 100);
    CHECK(r.reason == Termination::converged);
    CHECK(r.agd_iters == 0);
    CHECK(r.oracle_calls == 1);
  }
  SUBCASE("inadmissible delta") {
    const auto p = catalog("exp-1d");
    const auto r = algorithm1_run(p, p.ell_model(), scalar(1), 1.0, 2, 1e-6, 100);
    CHECK(r.reason == Termination::precondition_failed);
    CHECK(r.oracle_calls == 0);
    CHECK(r.trace.empty());
  }
  SUBCASE("r_bar below the initial distance") {
    const auto p = catalog("exp-1d");
    const auto r = algorithm1_run(p, p.ell_model(), scalar(3), 1e-3, 1, 1e-6, 100);
    CHECK(r.reason == Termination::precondition_failed);
  }
  SUBCASE("budget") {
    const auto p = catalog("exp-1d");
    const auto r = algorithm1_run(p, p.ell_model(), scalar(2), select_delta(p.ell_model(), 2), 2,
                                  1e-12, 10);
    CHECK(r.reason == Termination::budget);
    CHECK(r.oracle_calls == 10);
  }
  SUBCASE("constant model skips GD and runs standard AGD") {
    const auto q = catalog("quadratic", {{"d", 2}});
    const auto r = algorithm1_run(q, q.ell_model(), Vector::Ones(2), ExtendedReal::infinity(),
                                  std::sqrt(2.0), 1e-8, 10000);
    CHECK(r.reason == Termination::converged);
    CHECK(r.gd_iters == 0);
    CHECK(r.delta == Approx(2.0));
    for (const auto& t : r.trace) CHECK(t.step_gamma == 0.5);
  }
  SUBCASE("superquadratic path stays in the ball") {
    const auto q = catalog("quadratic", {{"d", 2}});
    const auto m = EllModel::power(3, 1, 1);
    Vector x0(2);
    x0 << 0.5, -0.5;
    RunOptions o;
    o.m_bar = estimate_m_bar(q, 1.0);
    const auto r = algorithm1_run(q, m, x0, select_delta(m, 1.0, o.m_bar), 1.0, 1e-10, 10000, o);
    CHECK(r.reason == Termination::converged);
    CHECK(r.flags == 0);
    RunOptions none;
    CHECK(algorithm1_run(q, m, x0, 1e-3, 1.0, 1e-10, 10000, none).reason ==
          Termination::precondition_failed);
  }
  SUBCASE("wrong model trips strict checks") {
    const auto q = catalog("quadratic", {{"L", 1}, {"d", 1}});
    const auto lie = EllModel::constant(0.05);  // γ = 10 ≫ 1/L
    CHECK_THROWS_AS(
        algorithm1_run(q, lie, scalar(1), ExtendedReal::infinity(), 1, 1e-6, 1000), InvariantViolation);
    RunOptions observe;
    observe.strict = false;
    const auto r =
        algorithm1_run(q, lie, scalar(1), ExtendedReal::infinity(), 1, 1e-6, 20, observe);
    CHECK(r.flags != 0);
    CHECK(describe_flags(r.flags).find("lyapunov") != std::string::npos);
  }
}

TEST_CASE("algorithm2_run") {
  SUBCASE("constant model gives gamma = 1/L") {
    const auto q = catalog("quadratic", {{"L", 4}, {"d", 2}});
    const auto r = algorithm2_run(q, q.ell_model(), Vector::Ones(2), 4, 2, 1e-8, 10000);
    CHECK(r.reason == Termination::converged);
    for (const auto& t : r.trace) CHECK(t.step_gamma == Approx(0.25).epsilon(1e-12));
  }
  SUBCASE("non-invertible psi is rejected") {
    const auto q = catalog("quadratic", {{"d", 2}});
    CHECK_THROWS_AS(algorithm2_run(q, EllModel::power(3, 1, 1), Vector::Ones(2), 1, 2, 1e-6, 100),
                    ConfigurationError);
    CHECK_THROWS_AS(algorithm2_run(q, EllModel::power(2, 1, 1), Vector::Ones(2), 1, 2, 1e-6, 100),
                    ConfigurationError);
  }
  SUBCASE("step sizes grow and the envelope holds") {
    const auto p = catalog("exp-1d");
    const auto r = algorithm2_run(p, p.ell_model(), scalar(2.5), 50, 3, 1e-9, 100000);
    CHECK(r.reason == Termination::converged);
    CHECK(r.flags == 0);
    for (std::size_t i = 1; i < r.trace.size(); ++i) {
      CHECK(r.trace[i].step_gamma >= r.trace[i - 1].step_gamma);
    }
    CHECK(r.oracle_calls == r.agd_iters + 1);
  }
  SUBCASE("small gamma_cap0 warns") {
    const auto p = catalog("exp-1d");
    RunOptions o;
    o.strict = false;
    const auto r = algorithm2_run(p, p.ell_model(), scalar(2.5), 1e-3, 3, 1e-6, 100000, o);
    CHECK(r.warnings.size() == 1);
  }
  SUBCASE("without f* the certified bound terminates") {
    const auto r = algorithm2_run(blind_quadratic(), EllModel::constant(1), scalar(1), 1, 1, 1e-4,
                                  100000);
    CHECK(r.reason == Termination::converged);
    CHECK(r.final_state.gamma_cap <= 1e-4);
    CHECK(*r.achieved_gap <= 1e-4);
  }
}

TEST_CASE("gd_only_run") {
  const auto q = catalog("quadratic", {{"d", 1}});
  const auto r = gd_only_run(q, q.ell_model(), scalar(1), 1, 0.005, 100);
  CHECK(r.reason == Termination::converged);
  CHECK(r.gd_iters == 4);
  CHECK(r.oracle_calls == 5);
}
