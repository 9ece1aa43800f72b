#pragma once

#include "lsmooth/solvers.hpp"

namespace lsmooth::detail {

struct GdLoop {
  GdResult result;
  bool exhausted = false;
  double initial_value = 0.0;
};

/// GD until the gap (or ‖∇f‖·R̄) is ≤ target; reports exhaustion instead of throwing.
GdLoop gd_loop(const Problem& problem, const EllModel& model, const Vector& x0, double target,
               double r_bar, long max_iterations, OracleCounter& oracle);

}  // namespace lsmooth::detail
