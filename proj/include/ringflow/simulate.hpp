#pragma once

#include <vector>

#include "ringflow/core_model.hpp"

namespace ringflow {

/// States are stored unchecked; integrate() enforces the escape band itself.
struct Trajectory {
  std::vector<double> times;
  std::vector<StateVector> states;
  ParamVector lam;
};

/// Roundoff band around [0,1] that trajectories must stay inside.
inline constexpr double kInvarianceBand = 1e-9;
inline constexpr double kDefaultDt = 1e-2;

// Fixed-step classical RK4. The final step is shortened to land on t_end.
// Throws StateEscape if a component leaves [-1e-9, 1 + 1e-9], which only
// happens when dt is too large for the rates.
Trajectory integrate(const ParamVector& lam, const StateVector& x0, double t_end,
                     double dt = kDefaultDt);

struct ConvergenceResult {
  StateVector state;
  double time;
  double field_norm;  // ||vector_field||_inf at `state`
};

/// integrate() that stops at the first step where ||vector_field||_inf <= tol.
/// Throws Timeout if that does not happen by t_max.
Trajectory integrate_to_tolerance(const ParamVector& lam, const StateVector& x0, double tol,
                                  double t_max, double dt = kDefaultDt);

/// Integrates until ||vector_field||_inf <= tol; throws Timeout past t_max.
ConvergenceResult converge_to_equilibrium(const ParamVector& lam, const StateVector& x0, double tol,
                                          double t_max, double dt = kDefaultDt);

}  // namespace ringflow
