#include <doctest.h>

#include <cmath>
#include <random>

#include "lsmooth/errors.hpp"
#include "lsmooth/verify.hpp"

using namespace lsmooth;
using doctest::Approx;

namespace {
Vector scalar(double v) { return Vector::Constant(1, v); }
}  // namespace

TEST_CASE("check_convexity_smoothness") {
  const auto q = catalog("quadratic", {{"d", 1}});
  CHECK(check_convexity_smoothness(q, scalar(0.3), scalar(0.3)) == 0.0);
  // (½ − 0 − 0) − 1²·∫₀¹(1 − v)dv = 0
  CHECK(std::abs(check_convexity_smoothness(q, scalar(1), scalar(0))) < 1e-15);

  const auto e = catalog("exp-experiment");
  const auto rep = sweep_convexity_smoothness(e, e.ell_model(), {1000, 0});
  CHECK(rep.trials == 1000);
  CHECK(rep.violations == 0);
  CHECK(rep.worst_margin >= -1e-8);

  // A model that is too optimistic must be caught.
  const auto bad = sweep_convexity_smoothness(e, EllModel::constant(0.5), {200, 0});
  CHECK(bad.violations > 0);
  CHECK(bad.witness.contains("x"));
}

TEST_CASE("check_gradient_transfer") {
  const auto q = catalog("quadratic", {{"L", 3}, {"d", 2}});
  Vector x(2), y(2);
  x << 1, -1;
  y << 0.2, 0.7;
  CHECK(check_gradient_transfer(q, x, x) == 0.0);
  CHECK(std::abs(check_gradient_transfer(q, x, y)) < 1e-14);

  const auto one = catalog("quadratic", {{"d", 1}});
  CHECK_THROWS_AS(check_gradient_transfer(one, EllModel::power(2, 1, 1), scalar(0), scalar(2)),
                  PreconditionError);

  const auto e = catalog("exp-1d");
  const auto rep = sweep_gradient_transfer(e, e.ell_model(), {1000, 0});
  CHECK(rep.violations == 0);
  CHECK(rep.worst_margin >= -1e-8);
}

TEST_CASE("check_descent_step") {
  const auto q = catalog("quadratic", {{"d", 1}});
  const auto model = q.ell_model();

  SUBCASE("at the optimum the inequality is 0 <= 0") {
    const AgdState s{scalar(0), scalar(0), 2.0, 0, q.evaluate(scalar(0))};
    CHECK(check_descent_step(q, model, s, 1.0) == 0.0);
  }
  SUBCASE("hand-executed step y = u = 1, Gamma = 1, gamma = 1/2") {
    const AgdState s{scalar(1), scalar(1), 1.0, 0, q.evaluate(scalar(1))};
    const double g = 0.5, a = std::sqrt(0.5);
    const double y1 = (1 + a - g) / (1 + a);
    const double u1 = 1 - a * y1;
    const double cap1 = 1 / (1 + a);
    const double lhs = (1 + a) * 0.5 * y1 * y1 + (1 + a) * cap1 / 2 * u1 * u1 - 1.0;
    const double rhs = 0.5 * (g - 1.0) * (y1 - 1) * (y1 - 1);
    CHECK(check_descent_step(q, model, s, g) == Approx(rhs - lhs).epsilon(1e-14));
    CHECK(rhs - lhs == Approx(0.25 + a * a * a / 2).epsilon(1e-14));
  }
  SUBCASE("closed form on random quadratic states") {
    // For f = ½L‖x‖² the margin equals γ/2·‖∇f(y)‖² + αL/2·‖y' − x*‖².
    const double L = 2.5;
    const auto p = catalog("quadratic", {{"L", L}, {"d", 3}});
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(-2, 2);
    for (int t = 0; t < 200; ++t) {
      Vector y(3), u(3);
      for (int i = 0; i < 3; ++i) y[i] = U(rng), u[i] = U(rng);
      const double cap = std::exp(U(rng) * 3);
      const double gamma = (0.5 + U(rng) / 4.5) / L;
      const AgdState s{y, u, cap, 0, p.evaluate(y)};
      const double a = std::sqrt(gamma * cap);
      const Vector y1 = (y + a * u - gamma * L * y) / (1 + a);
      const double expected = gamma / 2 * (L * y).squaredNorm() + a * L / 2 * y1.squaredNorm();
      const double m = check_descent_step(p, p.ell_model(), s, gamma);
      CHECK(std::abs(m - expected) <= 1e-12 * std::max(1.0, descent_scale(p, s)));
    }
  }
  SUBCASE("preconditions") {
    const AgdState s{scalar(1), scalar(1), 1.0, 0, q.evaluate(scalar(1))};
    CHECK_THROWS_AS(check_descent_step(q, model, s, 1.5), PreconditionError);
    auto oracle = [](const Vector& x) { return Evaluation{0.5 * x.squaredNorm(), x}; };
    const Problem blind("blind", 1, oracle, Domain::full_space(), model, std::nullopt,
                        Box{scalar(-1), scalar(1)});
    CHECK_THROWS_AS(check_descent_step(blind, model, s, 0.5), PreconditionError);
  }
}

TEST_CASE("check_gap_to_grad") {
  const auto q = catalog("quadratic", {{"d", 1}});
  const PsiProfile flat(EllModel::constant(1));
  CHECK(check_gap_to_grad(q, flat, scalar(0), 0.3));
  // Gap δ at |y| = √(2δ), and ψ⁻¹(δ) = √(2δ): boundary-tight.
  for (double d : {1e-6, 1e-3, 0.5, 7.0}) {
    CHECK(check_gap_to_grad(q, flat, scalar(std::sqrt(2 * d)), d));
  }
  // The gap must bound the gradient: a smaller δ than the true gap fails.
  CHECK_FALSE(check_gap_to_grad(q, flat, scalar(1.0), 0.4));

  const PsiProfile sq(EllModel::power(3, 1, 1));
  const auto q2 = catalog("quadratic", {{"d", 2}});
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(-0.14, 0.14);
  for (int t = 0; t < 200; ++t) {
    Vector y(2);
    y << U(rng), U(rng);
    if (0.5 * y.squaredNorm() > 0.01) continue;
    CHECK(check_gap_to_grad(q2, sq, y, 0.01));
  }
  CHECK_THROWS_AS(check_gap_to_grad(q2, sq, Vector::Zero(2), 0.02), PreconditionError);
}

TEST_CASE("all sweeps pass on the catalog") {
  for (const auto& entry : catalog_entries()) {
    const auto p = catalog(entry.name);
    for (const auto& r : verify_all(p, p.ell_model(), {300, 1})) {
      CHECK_MESSAGE(r.passed(), entry.name << " " << r.name << " worst " << r.worst_margin);
      CHECK(r.seed == 1);
      const auto j = r.to_json();
      CHECK(j.at("trials").get<long>() + j.at("skipped").get<long>() == 300);
    }
  }
}

TEST_CASE("sweeps are reproducible") {
  const auto p = catalog("exp-experiment");
  const auto a = sweep_descent_step(p, p.ell_model(), {100, 42});
  const auto b = sweep_descent_step(p, p.ell_model(), {100, 42});
  CHECK(a.worst_margin == b.worst_margin);
  CHECK(a.witness == b.witness);
}
