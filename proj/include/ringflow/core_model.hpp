#pragma once

// Ring flow model: n sites on a cycle, site i feeds site i+1 and site n feeds
// site 1. Paper indices are 1-based; everything here is 0-based with
// wraparound, so "lambda_n" is lam[n-1] and "e_{n+1}" is e[0].

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "ringflow/error.hpp"

namespace ringflow {

inline constexpr double kCubeTolerance = 1e-12;

/// Transition rates, all strictly positive, n >= 2.
class ParamVector {
 public:
  explicit ParamVector(std::vector<double> values);

  static ParamVector ones(std::size_t n);

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const noexcept { return values_; }

  ParamVector scaled(double c) const;
  double norm() const;

 private:
  std::vector<double> values_;
};

enum class Bounds {
  Closed,    // every entry in [0,1] up to the tolerance
  Interior,  // every entry strictly inside (0,1)
  Unchecked, // only the length is checked; used for iterates and trajectories
};

/// Site occupancies.
class StateVector {
 public:
  explicit StateVector(std::vector<double> values, Bounds bounds = Bounds::Closed,
                       double tol = kCubeTolerance);

  static StateVector constant(std::size_t n, double value);

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const noexcept { return values_; }

  /// Largest distance by which any entry sits outside [0,1] (0 if inside).
  double cube_violation() const;

 private:
  std::vector<double> values_;
};

/// The n-1 components of f, all anchored to the flux out of site n.
struct Residual {
  std::vector<double> values;

  std::size_t size() const noexcept { return values.size(); }
  double norm_inf() const;
  double norm2() const;
};

enum class BoundaryClass { Interior, AllZero, AllOne, MixedBoundary };

std::string_view to_string(BoundaryClass c);

/// Time derivative of the occupancies; the components sum to zero.
std::vector<double> vector_field(const ParamVector& lam, const StateVector& x);

Residual equilibrium_residual(const ParamVector& lam, const StateVector& e);

/// Total occupancy; conserved by the flow.
double first_integral(const StateVector& x);

BoundaryClass classify_boundary(const StateVector& e, double tol);

void require_same_size(std::size_t a, std::size_t b, std::string_view what);

namespace detail {

// Unvalidated kernels shared by the modules that iterate on raw buffers.
void vector_field(std::span<const double> lam, std::span<const double> x,
                  std::span<double> out);
void residual(std::span<const double> lam, std::span<const double> e,
              std::span<double> out);

}  // namespace detail

}  // namespace ringflow
