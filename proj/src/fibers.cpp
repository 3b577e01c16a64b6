#include "ringflow/fibers.hpp"

#include <algorithm>
#include <cmath>

namespace ringflow {

Fiber fiber_over(const StateVector& e, double boundary_tol) {
  switch (classify_boundary(e, boundary_tol)) {
    case BoundaryClass::AllZero:
    case BoundaryClass::AllOne:
      return {Fiber::Kind::WholeSpace, std::nullopt};
    case BoundaryClass::MixedBoundary:
      return {Fiber::Kind::Empty, std::nullopt};
    case BoundaryClass::Interior:
      break;
  }
  return {Fiber::Kind::Ray, fiber_direction(e)};
}

FiberDirection fiber_direction(const StateVector& e) {
  const std::size_t n = e.size();
  const BoundaryClass cls = classify_boundary(e, 0.0);
  if (cls == BoundaryClass::AllZero || cls == BoundaryClass::AllOne) {
    throw Error(ErrorCode::DegenerateFiber,
                "fiber over the all-" + std::string(cls == BoundaryClass::AllZero ? "zero" : "one") +
                    " state is the whole parameter space");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!(e[i] > 0.0 && e[i] < 1.0)) {
      throw Error(ErrorCode::InvalidArgument, "fiber_direction needs a state strictly inside (0,1)^n");
    }
  }
  std::vector<double> omega(n);
  // Scale by the smallest flux first so the reciprocals stay near 1.
  double min_flux = 1.0;
  for (std::size_t i = 0; i < n; ++i) min_flux = std::min(min_flux, e[i] * (1.0 - e[(i + 1) % n]));
  double sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    omega[i] = min_flux / (e[i] * (1.0 - e[(i + 1) % n]));
    sq += omega[i] * omega[i];
  }
  const double norm = std::sqrt(sq);
  for (double& w : omega) w /= norm;
  return {ParamVector(std::move(omega)), e};
}

bool fibers_coincide(const ParamVector& lam1, const ParamVector& lam2, double tol) {
  require_same_size(lam1.size(), lam2.size(), "fibers_coincide");
  if (tol < 0.0) throw Error(ErrorCode::InvalidArgument, "tolerance must be >= 0");
  double dot = 0.0;
  for (std::size_t i = 0; i < lam1.size(); ++i) dot += lam1[i] * lam2[i];
  const double cosine = std::clamp(dot / (lam1.norm() * lam2.norm()), -1.0, 1.0);
  // acos loses everything below ~1e-8 near cosine = 1; the sine from the
  // cross-term norm keeps small angles resolvable.
  double cross_sq = 0.0;
  for (std::size_t i = 0; i < lam1.size(); ++i) {
    for (std::size_t j = i + 1; j < lam1.size(); ++j) {
      const double c = lam1[i] * lam2[j] - lam1[j] * lam2[i];
      cross_sq += c * c;
    }
  }
  const double sine = std::sqrt(cross_sq) / (lam1.norm() * lam2.norm());
  const double angle = std::atan2(sine, cosine);
  return angle <= tol;
}

}  // namespace ringflow
