#pragma once

#include "lsmooth/ell_model.hpp"
#include "lsmooth/extended_real.hpp"

namespace lsmooth {

/// ψ(x) = x² / (2ℓ(4x)).
double psi_eval(const EllModel& model, double x);

/// Largest Δ such that ψ is strictly increasing on [0, Δ).
///
/// Closed form for the parametric models; a grid scan refined by bisection
/// on the finite-difference sign for custom profiles.
ExtendedReal delta_max(const EllModel& model);

/// Grid scan for Δ_max over [0, x_end], usable on any model. Returns +∞ when
/// ψ increases across the whole grid.
ExtendedReal scan_delta_max(const EllModel& model, double x_end, int points_per_unit_segment = 256);

/// ℓ together with the derived ψ range data.
class PsiProfile {
 public:
  explicit PsiProfile(EllModel model);

  const EllModel& model() const { return model_; }
  ExtendedReal delta_max() const { return delta_max_; }
  /// ψ(Δ_max), or lim ψ(x) as x → ∞ when Δ_max = +∞.
  ExtendedReal psi_at_delta_max() const { return psi_sup_; }

  /// ψ strictly increasing on ℝ₊ and unbounded.
  bool invertible_on_half_line() const {
    return delta_max_.is_infinite() && psi_sup_.is_infinite();
  }

  double operator()(double x) const { return psi_eval(model_, x); }

 private:
  EllModel model_;
  ExtendedReal delta_max_;
  ExtendedReal psi_sup_;
};

inline constexpr double kDefaultInverseTolerance = 1e-14;

/// ψ⁻¹(t) on the increasing branch. Throws OutOfRangeError for
/// t ≥ ψ(Δ_max) and DomainError for t < 0.
double psi_inverse(const PsiProfile& profile, double t, double tol = kDefaultInverseTolerance);

struct DeltaBranches {
  double left;
  ExtendedReal right;
};

/// The two crossings of ψ with the level δ: Δ_left on [0, Δ_max) and the
/// first crossing Δ_right in [Δ_max, ∞), +∞ when none exists.
DeltaBranches delta_left_right(const PsiProfile& profile, double delta);

/// ℓ(8√(δ·ℓ(0))) ≤ 2ℓ(0). Equality is accepted.
bool admissible_delta(const EllModel& model, double delta);

/// q(s; a) = ∫₀ˢ dv / ℓ(a + v).
double q_eval(const EllModel& model, double s, double a);

/// q_max(a) = ∫₀^∞ dv / ℓ(a + v).
ExtendedReal q_max(const EllModel& model, double a);

/// Inverse of q(·; a). Throws OutOfRangeError for r ≥ q_max(a).
double q_inverse(const EllModel& model, double r, double a);

}  // namespace lsmooth
