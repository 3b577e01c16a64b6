#pragma once

#include <optional>

#include "ringflow/core_model.hpp"

namespace ringflow {

/// Unit-norm generator of the ray of parameter vectors for which `anchor` is an
/// equilibrium.
struct FiberDirection {
  ParamVector omega;
  StateVector anchor;
};

/// The set of parameter vectors making a given state an equilibrium.
struct Fiber {
  enum class Kind {
    Ray,         // interior state: positive multiples of a single direction
    WholeSpace,  // all-zero or all-one state: every parameter vector works
    Empty,       // some but not all entries on the cube boundary
  };
  Kind kind;
  std::optional<FiberDirection> direction;  // set iff kind == Ray
};

Fiber fiber_over(const StateVector& e, double boundary_tol = 0.0);

// omega_i is proportional to 1 / (e_i (1 - e_{i+1})), which makes every flux
// equal. Throws DegenerateFiber for the all-zero / all-one states and
// InvalidArgument for any other non-interior state.
FiberDirection fiber_direction(const StateVector& e);

/// Positive collinearity: the angle between lam1 and lam2 is at most tol.
bool fibers_coincide(const ParamVector& lam1, const ParamVector& lam2, double tol);

}  // namespace ringflow
