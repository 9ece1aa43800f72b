#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lsmooth/ell_model.hpp"
#include "lsmooth/extended_real.hpp"
#include "lsmooth/problems.hpp"
#include "lsmooth/smoothness.hpp"

namespace lsmooth {

// ---------------------------------------------------------------------------
// Γ-sequence

struct GammaAlpha {
  double alpha;
  double next_gamma_cap;
};

/// α = √(γΓ), Γ' = Γ/(1 + α).
GammaAlpha gamma_alpha_step(double gamma_cap, double step_gamma);

/// k̄ = max{1 + ½·log_{3/2}(γΓ₀/4), 0}.
double kbar(double gamma_cap0, double step_gamma);

/// 9 / (γ(k + 1 − k̄)²), the bound on Γ_{k+1}. Throws PreconditionError for k < k̄.
double gamma_envelope(long k, double step_gamma, double kbar);

// ---------------------------------------------------------------------------
// Runtime invariants

/// Bits set in TraceRecord::flags when a runtime invariant fails.
enum InvariantFlag : std::uint32_t {
  kFlagCertifiedGap = 1u << 0,     // f(y) − f* ≤ Γ·R̄²
  kFlagLyapunov = 1u << 1,         // V_{k+1} ≤ V_k / (1 + α_k)
  kFlagWarmRegion = 1u << 2,       // ℓ(4‖∇f(y)‖) ≤ 2ℓ(0)
  kFlagGradientEnvelope = 1u << 3, // ‖∇f(y_k)‖ ≤ ψ⁻¹(Γ_k·R̄²)
  kFlagBallConfinement = 1u << 4,  // ‖y − x*‖, ‖u − x*‖ ≤ 2R̄
  kFlagStepSafety = 1u << 5,       // γ ≤ 1/ℓ(2‖∇f(y_k)‖)
  kFlagGammaEnvelope = 1u << 6,    // Γ_{k+1} ≤ 9/(γ(k+1−k̄)²)
  kFlagStepMonotone = 1u << 7,     // γ_k non-decreasing
};

/// Comma-separated names of the set bits.
std::string describe_flags(std::uint32_t flags);

// ---------------------------------------------------------------------------
// State and trace

/// The solver triple (y, u, Γ) with the cached oracle answer at y.
struct AgdState {
  Vector y;
  Vector u;
  double gamma_cap;
  long k = 0;
  Evaluation at_y;
};

enum class Phase { gd, agd };

struct TraceRecord {
  long k;
  Phase phase;
  double value;  // f at the iterate; not part of the CSV
  std::optional<double> f_gap;
  double grad_norm;
  std::optional<double> gamma_cap;
  std::optional<double> alpha;
  double step_gamma;
  std::optional<double> dist_to_opt;
  std::optional<double> bound_gap;
  std::optional<double> lyapunov;
  std::uint32_t flags = 0;
};

/// Counts fresh gradient evaluations made through it.
class OracleCounter {
 public:
  explicit OracleCounter(const Problem& problem) : problem_(&problem) {}
  Evaluation operator()(const Vector& x) {
    ++calls_;
    return problem_->evaluate(x);
  }
  long calls() const { return calls_; }

 private:
  const Problem* problem_;
  long calls_ = 0;
};

/// Initial state y = u = x, evaluated once.
AgdState make_agd_state(const Problem& problem, const Vector& x, double gamma_cap,
                        OracleCounter& oracle);

/// One accelerated step with step size γ.
/// Reuses ∇f(yᵏ) from the state and makes exactly one fresh oracle call at
/// y^{k+1}. Throws SafetyViolation when y^{k+1} leaves 𝒳.
AgdState agd_step(const AgdState& state, double step_gamma, const Problem& problem,
                  OracleCounter& oracle);
AgdState agd_step(const AgdState& state, double step_gamma, const Problem& problem);

// ---------------------------------------------------------------------------
// GD warm start

struct GdResult {
  Vector x_bar;
  Evaluation at_x_bar;
  long iterations = 0;
  std::vector<TraceRecord> trace;
};

/// x ← x − ∇f(x) / (2ℓ(2‖∇f(x)‖)) until f(x) − f* ≤ δ/2 (f* known) or
/// ‖∇f(x)‖·R̄ ≤ δ/2. `max_iterations` bounds the number of steps.
/// Throws BudgetExhausted, or SafetyViolation when the distance to a known
/// x* grows or an iterate leaves 𝒳.
GdResult gd_run(const Problem& problem, const EllModel& model, const Vector& x0, double delta,
                double r_bar, long max_iterations);
GdResult gd_run(const Problem& problem, const EllModel& model, const Vector& x0, double delta,
                double r_bar, long max_iterations, OracleCounter& oracle);

// ---------------------------------------------------------------------------
// δ policy

/// The warm-start level δ: L0/(64L1²)-type policies for ρ ≤ 2, the
/// superquadratic δ̄ clipped into the admissible set Q otherwise. +∞ means any
/// δ is admissible (constant ℓ) and the GD phase is skipped.
/// Throws ConfigurationError for superquadratic models without `m_bar`.
ExtendedReal select_delta(const EllModel& model, double r_bar,
                          std::optional<double> m_bar = std::nullopt);

/// δ ∈ Q: δ ≤ ψ(Δ_max)/2, ℓ(4Δ_left(δ)) ≤ 2ℓ(0), Δ_right(δ) ≥ 2M.
bool in_superquadratic_set(const PsiProfile& profile, double delta, double m_bar);

/// Heuristic M_R̄: max ‖∇f‖ sampled on and inside the ball of radius 2R̄
/// around x*, times `safety`. Requires a known optimum.
double estimate_m_bar(const Problem& problem, double r_bar, int samples = 2000,
                      std::uint64_t seed = 0, double safety = 2.0);

/// Smallest integer k ≥ 1 with ℓ(24·√(ℓ(4ψ⁻¹(Γ₀R̄²))·ℓ(0)·R̄²/k²)) ≤ 2ℓ(0).
long compute_k_init(const PsiProfile& profile, double gamma_cap0, double r_bar);

// ---------------------------------------------------------------------------
// Algorithms

enum class Termination { converged, budget, precondition_failed };
std::string to_string(Termination t);

struct RunOptions {
  /// Strict: a failed invariant throws InvariantViolation. Otherwise it is
  /// only recorded in the trace flags.
  bool strict = true;
  /// Upper bound on ‖∇f‖ over B(x*, 2R̄); required on the superquadratic path.
  std::optional<double> m_bar;
};

struct RunResult {
  AgdState final_state;
  long gd_iters = 0;
  long agd_iters = 0;
  long oracle_calls = 0;
  std::optional<double> achieved_gap;
  double certified_bound = 0.0;  // Γ_K·R̄² at exit
  std::vector<TraceRecord> trace;
  Termination reason = Termination::converged;
  std::uint32_t flags = 0;  // OR over the trace
  std::string message;
  std::vector<std::string> warnings;
  double delta = 0.0;
  double gamma_cap0 = 0.0;
  double initial_value = 0.0;
};

/// Two-phase method: GD warm start to gap δ/2, then accelerated steps with
/// γ = 1/(2ℓ(0)) and Γ₀ = δ/R̄². `budget` caps oracle calls.
RunResult algorithm1_run(const Problem& problem, const EllModel& model, const Vector& x0,
                         ExtendedReal delta, double r_bar, double epsilon, long budget,
                         const RunOptions& options = {});

/// Accelerated steps from x0 with γ_k = 1/ℓ(4ψ⁻¹(Γ_k·R̄²)). Throws
/// ConfigurationError when ψ is not invertible on ℝ₊.
RunResult algorithm2_run(const Problem& problem, const EllModel& model, const Vector& x0,
                         double gamma_cap0, double r_bar, double epsilon, long budget,
                         const RunOptions& options = {});

/// Plain GD until the gap (or its certificate) is ≤ ε, reported as a RunResult.
RunResult gd_only_run(const Problem& problem, const EllModel& model, const Vector& x0,
                      double r_bar, double epsilon, long budget);

}  // namespace lsmooth
