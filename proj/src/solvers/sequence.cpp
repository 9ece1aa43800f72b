#include <cmath>
#include <string>

#include "lsmooth/errors.hpp"
#include "lsmooth/solvers.hpp"

namespace lsmooth {

GammaAlpha gamma_alpha_step(double gamma_cap, double step_gamma) {
  const double alpha = std::sqrt(step_gamma * gamma_cap);
  return {alpha, gamma_cap / (1.0 + alpha)};
}

double kbar(double gamma_cap0, double step_gamma) {
  const double v = 1.0 + 0.5 * std::log(step_gamma * gamma_cap0 / 4.0) / std::log(1.5);
  return std::max(v, 0.0);
}

double gamma_envelope(long k, double step_gamma, double kbar) {
  if (static_cast<double>(k) < kbar) {
    throw PreconditionError("gamma_envelope: k = " + std::to_string(k) + " is below kbar = " +
                            std::to_string(kbar));
  }
  const double m = static_cast<double>(k) + 1.0 - kbar;
  return 9.0 / (step_gamma * m * m);
}

std::string describe_flags(std::uint32_t flags) {
  static const std::pair<std::uint32_t, const char*> names[] = {
      {kFlagCertifiedGap, "certified-gap"},
      {kFlagLyapunov, "lyapunov"},
      {kFlagWarmRegion, "warm-region"},
      {kFlagGradientEnvelope, "gradient-envelope"},
      {kFlagBallConfinement, "ball-confinement"},
      {kFlagStepSafety, "step-safety"},
      {kFlagGammaEnvelope, "gamma-envelope"},
      {kFlagStepMonotone, "step-monotone"},
  };
  std::string out;
  for (const auto& [bit, name] : names) {
    if ((flags & bit) == 0) continue;
    if (!out.empty()) out += ",";
    out += name;
  }
  return out;
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::converged:
      return "converged";
    case Termination::budget:
      return "budget";
    case Termination::precondition_failed:
      return "precondition-failed";
  }
  return "unknown";
}

}  // namespace lsmooth
