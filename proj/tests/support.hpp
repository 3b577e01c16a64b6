#pragma once

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "ringflow/core_model.hpp"

namespace ringflow::testing {

// Three-site instance shown with the continuation figure.
inline const std::vector<double> kFigLambda{1.39328599, 8.30098374, 3.98355604};
// Printed to 8 decimals; the printed point is only about 2e-6 from the true
// equilibrium, so its residual is ~1.6e-5.
inline const std::vector<double> kFigE1{0.53112814, 0.1203633, 0.34850856};
// The same equilibrium solved to 40 digits (mpmath findroot), rounded to double.
inline const std::vector<double> kFigE1Refined{0.53112613629079117, 0.12036545085959452, 0.34850841284961431};

inline ParamVector random_params(std::size_t n, std::mt19937_64& rng, double lo = 0.1, double hi = 10.0) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  std::vector<double> v(n);
  for (double& x : v) x = std::exp(u(rng));
  return ParamVector(std::move(v));
}

inline StateVector random_interior(std::size_t n, std::mt19937_64& rng, double lo = 0.05, double hi = 0.95) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return StateVector(std::move(v), Bounds::Interior);
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double max_abs(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace ringflow::testing
