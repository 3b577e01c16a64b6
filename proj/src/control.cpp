#include "ringflow/control.hpp"

#include <cmath>

#include "ringflow/fibers.hpp"

namespace ringflow {

bool reachable(const StateVector& x0, const StateVector& target, double tol) {
  require_same_size(x0.size(), target.size(), "reachable");
  if (tol < 0.0) throw Error(ErrorCode::InvalidArgument, "tolerance must be >= 0");
  if (target.cube_violation() > 0.0) return false;
  return std::abs(first_integral(x0) - first_integral(target)) <= tol;
}

ControlPlan plan(const StateVector& target, std::optional<double> scale) {
  const double c = scale.value_or(std::sqrt(static_cast<double>(target.size())));
  if (!(c > 0.0) || !std::isfinite(c)) throw Error(ErrorCode::InvalidArgument, "scale must be > 0");
  switch (classify_boundary(target, 0.0)) {
    case BoundaryClass::AllZero:
    case BoundaryClass::AllOne:
      throw Error(ErrorCode::BoundaryTarget,
                  "the all-zero and all-one states are equilibria for every rate vector");
    case BoundaryClass::MixedBoundary:
      throw Error(ErrorCode::InvalidArgument, "target has boundary entries and is never an equilibrium");
    case BoundaryClass::Interior:
      break;
  }
  FiberDirection dir = fiber_direction(target);
  return {target, dir.omega.scaled(c), c};
}

}  // namespace ringflow
