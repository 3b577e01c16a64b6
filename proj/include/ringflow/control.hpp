#pragma once

#include <optional>

#include "ringflow/core_model.hpp"

namespace ringflow {

/// Constant rates whose equilibrium on the target's hyperplane is the target.
struct ControlPlan {
  StateVector target;
  ParamVector lam;
  double scale;
};

inline constexpr double kDefaultReachTol = 1e-9;

/// Reachable set from x0: the cube intersected with the hyperplane of x0's first integral.
bool reachable(const StateVector& x0, const StateVector& target, double tol = kDefaultReachTol);

// lam = scale * omega_target. The default scale sqrt(n) maps the symmetric
// target to unit rates. Throws BoundaryTarget for the all-zero / all-one
// targets, which are equilibria for every lam.
ControlPlan plan(const StateVector& target, std::optional<double> scale = std::nullopt);

}  // namespace ringflow
