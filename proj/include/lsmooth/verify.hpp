#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lsmooth/ell_model.hpp"
#include "lsmooth/problems.hpp"
#include "lsmooth/smoothness.hpp"
#include "lsmooth/solvers.hpp"

namespace lsmooth {

inline constexpr double kVerifyQuadratureTolerance = 1e-10;
inline constexpr double kVerifyMarginTolerance = 1e-8;

/// f(x) − f(y) − ⟨∇f(y), x − y⟩ minus
/// ‖Δg‖²·∫₀¹ (1 − v)/ℓ(‖∇f(x)‖ + ‖Δg‖v) dv, with Δg = ∇f(x) − ∇f(y).
double check_convexity_smoothness(const Problem& problem, const EllModel& model, const Vector& x,
                                  const Vector& y);
double check_convexity_smoothness(const Problem& problem, const Vector& x, const Vector& y);

/// q⁻¹(‖y − x‖; ‖∇f(x)‖) − ‖∇f(y) − ∇f(x)‖.
/// Throws PreconditionError when ‖y − x‖ ≥ q_max(‖∇f(x)‖).
double check_gradient_transfer(const Problem& problem, const EllModel& model, const Vector& x,
                               const Vector& y);
double check_gradient_transfer(const Problem& problem, const Vector& x, const Vector& y);

/// RHS − LHS of the one-step Lyapunov descent inequality for a virtual step
/// with free γ ≤ 1/ℓ(2‖∇f(yᵏ)‖). Requires a known optimum.
double check_descent_step(const Problem& problem, const EllModel& model, const AgdState& state,
                          double step_gamma);

/// Scale used to turn the descent margin into a relative tolerance.
double descent_scale(const Problem& problem, const AgdState& state);

/// For f(y) − f* ≤ δ < ψ(Δ_max): ‖∇f(y)‖ ≤ Δ_left(δ) or ‖∇f(y)‖ ≥ Δ_right(δ)
/// (just ‖∇f(y)‖ ≤ ψ⁻¹(δ) when Δ_max = ∞).
bool check_gap_to_grad(const Problem& problem, const PsiProfile& profile, const Vector& y,
                       double delta);

struct CheckReport {
  std::string name;
  long trials = 0;
  long skipped = 0;
  long violations = 0;
  double worst_margin = 0.0;  // most negative normalized margin seen
  nlohmann::json witness;     // inputs at the worst margin
  std::uint64_t seed = 0;
  double quadrature_tolerance = kVerifyQuadratureTolerance;
  double tolerance = kVerifyMarginTolerance;

  bool passed() const { return violations == 0; }
  nlohmann::json to_json() const;
};

struct SweepOptions {
  long trials = 1000;
  std::uint64_t seed = 0;
};

/// Random pairs in the problem's sample region; margins are normalized by
/// max(1, |f(x)|, |f(y)|) and compared with −tolerance.
CheckReport sweep_convexity_smoothness(const Problem& problem, const EllModel& model,
                                       const SweepOptions& options = {});
/// As above; pairs farther apart than 0.9·q_max(‖∇f(x)‖) are pulled toward x.
CheckReport sweep_gradient_transfer(const Problem& problem, const EllModel& model,
                                    const SweepOptions& options = {});
/// Random states (y, u, Γ) and step sizes γ ∈ (0, 1/ℓ(2‖∇f(y)‖)].
CheckReport sweep_descent_step(const Problem& problem, const EllModel& model,
                               const SweepOptions& options = {});
/// Random points y with δ = f(y) − f*; points with δ ≥ ψ(Δ_max) are skipped.
CheckReport sweep_gap_to_grad(const Problem& problem, const EllModel& model,
                              const SweepOptions& options = {});

/// All four sweeps.
std::vector<CheckReport> verify_all(const Problem& problem, const EllModel& model,
                                    const SweepOptions& options = {});

}  // namespace lsmooth
