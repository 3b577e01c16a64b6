#pragma once

// Brute-force verifiers that do not go through the continuation path: Newton
// multistart on the hyperplane and central-difference Jacobians.

#include <cstdint>
#include <random>
#include <vector>

#include "ringflow/core_model.hpp"
#include "ringflow/homotopy.hpp"
#include "ringflow/linalg.hpp"

namespace ringflow {

struct MultistartReport {
  std::uint64_t rng_seed = 0;
  std::size_t seeds_tried = 0;
  std::size_t converged = 0;      // converged inside the closed cube
  std::size_t out_of_cube = 0;    // converged to a root of g outside [0,1]^n
  std::size_t failed = 0;
  std::vector<StateVector> cluster_centers;
  std::vector<std::size_t> cluster_sizes;
  double max_cluster_radius = 0.0;
};

inline constexpr double kClusterRadius = 1e-6;

/// Options used for each multistart Newton run (more iterations than the tracer).
TracerOptions multistart_options();

MultistartReport newton_multistart(const ParamVector& lam, double s, std::size_t num_seeds,
                                   std::uint64_t rng_seed);

// Uniform-ish point of {x in [0,1]^n : sum x = s}. Uses a scaled flat
// Dirichlet draw rejected to the cube (reflected through x -> 1 - x when
// s > n/2); falls back to random mass-preserving transfers when rejection
// keeps failing.
std::vector<double> sample_hyperplane(std::size_t n, double s, std::mt19937_64& rng);

enum class JacobianWrt { Lambda, E };

DenseMatrix fd_jacobian(JacobianWrt which, const ParamVector& lam, const StateVector& e, double h = 1e-6);

}  // namespace ringflow
