#include "ringflow/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace ringflow {

void require_same_size(std::size_t a, std::size_t b, std::string_view what) {
  if (a != b) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string(what) + ": length " + std::to_string(a) + " vs " +
                    std::to_string(b));
  }
}

ParamVector::ParamVector(std::vector<double> values) : values_(std::move(values)) {
  if (values_.size() < 2) {
    throw Error(ErrorCode::InvalidArgument, "parameter vector needs n >= 2 entries");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!(values_[i] > 0.0) || !std::isfinite(values_[i])) {
      throw Error(ErrorCode::InvalidArgument,
                  "lambda_" + std::to_string(i + 1) + " must be finite and > 0");
    }
  }
}

ParamVector ParamVector::ones(std::size_t n) {
  return ParamVector(std::vector<double>(n, 1.0));
}

ParamVector ParamVector::scaled(double c) const {
  std::vector<double> out(values_);
  for (double& v : out) v *= c;
  return ParamVector(std::move(out));
}

double ParamVector::norm() const {
  return std::sqrt(std::inner_product(values_.begin(), values_.end(), values_.begin(), 0.0));
}

StateVector::StateVector(std::vector<double> values, Bounds bounds, double tol)
    : values_(std::move(values)) {
  if (values_.size() < 2) {
    throw Error(ErrorCode::InvalidArgument, "state vector needs n >= 2 entries");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const double v = values_[i];
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::InvalidArgument, "e_" + std::to_string(i + 1) + " is not finite");
    }
    const bool ok = bounds == Bounds::Unchecked ||
                    (bounds == Bounds::Closed && v >= -tol && v <= 1.0 + tol) ||
                    (bounds == Bounds::Interior && v > 0.0 && v < 1.0);
    if (!ok) {
      throw Error(ErrorCode::InvalidArgument,
                  "e_" + std::to_string(i + 1) + " = " + std::to_string(v) +
                      (bounds == Bounds::Interior ? " is not in (0,1)" : " is not in [0,1]"));
    }
  }
}

StateVector StateVector::constant(std::size_t n, double value) {
  return StateVector(std::vector<double>(n, value));
}

double StateVector::cube_violation() const {
  double worst = 0.0;
  for (double v : values_) worst = std::max({worst, -v, v - 1.0});
  return worst;
}

double Residual::norm_inf() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

double Residual::norm2() const {
  return std::sqrt(std::inner_product(values.begin(), values.end(), values.begin(), 0.0));
}

std::string_view to_string(BoundaryClass c) {
  switch (c) {
    case BoundaryClass::Interior: return "Interior";
    case BoundaryClass::AllZero: return "AllZero";
    case BoundaryClass::AllOne: return "AllOne";
    case BoundaryClass::MixedBoundary: return "MixedBoundary";
  }
  return "Unknown";
}

namespace detail {

void vector_field(std::span<const double> lam, std::span<const double> x,
                  std::span<double> out) {
  const std::size_t n = x.size();
  // flux from site i to site i+1
  auto flux = [&](std::size_t i) { return lam[i] * x[i] * (1.0 - x[(i + 1) % n]); };
  double incoming = flux(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double outgoing = flux(i);
    out[i] = incoming - outgoing;
    incoming = outgoing;
  }
}

void residual(std::span<const double> lam, std::span<const double> e,
              std::span<double> out) {
  const std::size_t n = e.size();
  const double anchor = lam[n - 1] * e[n - 1] * (1.0 - e[0]);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    out[i] = anchor - lam[i] * e[i] * (1.0 - e[i + 1]);
  }
}

}  // namespace detail

std::vector<double> vector_field(const ParamVector& lam, const StateVector& x) {
  require_same_size(lam.size(), x.size(), "vector_field");
  std::vector<double> out(x.size());
  detail::vector_field(lam.values(), x.values(), out);
  return out;
}

Residual equilibrium_residual(const ParamVector& lam, const StateVector& e) {
  require_same_size(lam.size(), e.size(), "equilibrium_residual");
  Residual r{std::vector<double>(e.size() - 1)};
  detail::residual(lam.values(), e.values(), r.values);
  return r;
}

double first_integral(const StateVector& x) {
  return std::accumulate(x.values().begin(), x.values().end(), 0.0);
}

BoundaryClass classify_boundary(const StateVector& e, double tol) {
  if (tol < 0.0) throw Error(ErrorCode::InvalidArgument, "tolerance must be >= 0");
  std::size_t zeros = 0, ones = 0;
  for (double v : e.values()) {
    if (std::abs(v) <= tol) ++zeros;
    else if (std::abs(v - 1.0) <= tol) ++ones;
  }
  if (zeros == e.size()) return BoundaryClass::AllZero;
  if (ones == e.size()) return BoundaryClass::AllOne;
  if (zeros + ones > 0) return BoundaryClass::MixedBoundary;
  return BoundaryClass::Interior;
}

}  // namespace ringflow
