#pragma once

// Continuation from the diagonal equilibrium at unit rates to the equilibrium
// for arbitrary rates, on the hyperplane sum(e) = s.
//
// With g(lam, e) = (f(lam, e), sum(e) - s) and lam(t) = (1 - t) lam_start + t lam_end,
// the path solves H(e, t) = g(lam(t), e) = 0 for t in [0, 1]. Its Jacobian in e
// is the augmented matrix W, which is invertible on the whole equilibrium set
// inside the hyperplane, so the path has no turning points in t and plain
// t-stepping is enough.

#include <cstddef>
#include <vector>

#include "ringflow/core_model.hpp"

namespace ringflow {

struct TracerOptions {
  double initial_step = 1e-2;
  double min_step = 1e-8;
  double max_step = 0.1;
  double corrector_tol = 1e-10;  // on ||H||_inf
  std::size_t max_corrector_iters = 8;
  std::size_t max_steps = 100000;

  void validate() const;
};

/// Distance from 0 or n within which s is accepted but flagged.
inline constexpr double kNearBoundarySlack = 1e-6;

class HomotopyProblem {
 public:
  HomotopyProblem(ParamVector lam_start, ParamVector lam_end, double s);

  /// The conventional problem starting from unit rates.
  static HomotopyProblem from_unit(ParamVector lam_end, double s);

  const ParamVector& lam_start() const noexcept { return lam_start_; }
  const ParamVector& lam_end() const noexcept { return lam_end_; }
  double s() const noexcept { return s_; }
  std::size_t size() const noexcept { return lam_start_.size(); }
  bool near_boundary() const noexcept { return near_boundary_; }

  /// (1 - t) lam_start + t lam_end
  ParamVector lam_at(double t) const;

 private:
  ParamVector lam_start_;
  ParamVector lam_end_;
  double s_;
  bool near_boundary_;
};

struct PathNode {
  double t;
  StateVector e;
  double residual_norm;  // ||H(e, t)||_inf
  double det_w;
};

enum class TraceStatus { Converged, StepUnderflow, MaxSteps };

std::string_view to_string(TraceStatus status);

struct PathTrace {
  double s;
  ParamVector lam_start;
  ParamVector lam_end;
  std::vector<PathNode> nodes;
  TraceStatus status;
  bool near_boundary = false;
  std::size_t rejected_steps = 0;
};

/// The diagonal equilibrium (s/n, ..., s/n) of unit rates.
StateVector start_point(std::size_t n, double s);

/// g(lam, e): the n-1 components of f followed by sum(e) - s.
std::vector<double> augmented_residual(const ParamVector& lam, const StateVector& e, double s);

std::vector<double> homotopy_residual(const HomotopyProblem& prob, const StateVector& e, double t);

/// de/dt along the path: solves W v = -dH/dt. The result sums to zero.
std::vector<double> path_tangent(const HomotopyProblem& prob, const StateVector& e, double t);

struct CorrectorResult {
  bool converged = false;
  std::vector<double> e;
  std::size_t iterations = 0;
  /// ||g||_inf before each iteration, then after the last one.
  std::vector<double> residual_history;
  bool left_cube = false;  // an iterate moved more than 0.1 outside [0,1]^n
  bool singular = false;
};

// Full Newton on g(lam, .) = 0 from `guess`, rebuilding W each iteration.
// Stops on success, on max_corrector_iters, on a singular W, or as soon as an
// iterate leaves the cube by more than 0.1. Never throws for numerical reasons.
CorrectorResult newton_iterate(const ParamVector& lam, double s, std::span<const double> guess,
                               const TracerOptions& opts);

/// newton_iterate that throws NoConvergence / SingularW instead of reporting.
StateVector newton_correct(const ParamVector& lam, double s, const StateVector& guess,
                           const TracerOptions& opts);

PathTrace trace_path(const HomotopyProblem& prob, const TracerOptions& opts);

/// The unique equilibrium on the hyperplane sum(e) = s, traced from unit rates.
StateVector equilibrium_at(const ParamVector& lam, double s, const TracerOptions& opts = {});

}  // namespace ringflow
