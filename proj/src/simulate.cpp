#include "ringflow/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ringflow {

namespace {

class Rk4Stepper {
 public:
  explicit Rk4Stepper(const ParamVector& lam)
      : lam_(lam.values()), k1_(lam.size()), k2_(lam.size()), k3_(lam.size()), k4_(lam.size()),
        tmp_(lam.size()) {}

  void step(std::vector<double>& x, double h) {
    const std::size_t n = x.size();
    detail::vector_field(lam_, x, k1_);
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = x[i] + 0.5 * h * k1_[i];
    detail::vector_field(lam_, tmp_, k2_);
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = x[i] + 0.5 * h * k2_[i];
    detail::vector_field(lam_, tmp_, k3_);
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = x[i] + h * k3_[i];
    detail::vector_field(lam_, tmp_, k4_);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += h / 6.0 * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
    }
  }

  double field_norm(const std::vector<double>& x) {
    detail::vector_field(lam_, x, k1_);
    double m = 0.0;
    for (double v : k1_) m = std::max(m, std::abs(v));
    return m;
  }

 private:
  std::span<const double> lam_;
  std::vector<double> k1_, k2_, k3_, k4_, tmp_;
};

void check_band(const std::vector<double>& x, double t) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] >= -kInvarianceBand && x[i] <= 1.0 + kInvarianceBand)) {
      throw Error(ErrorCode::StateEscape, "x_" + std::to_string(i + 1) + " = " + std::to_string(x[i]) +
                                              " left the unit cube at t = " + std::to_string(t) +
                                              "; reduce dt");
    }
  }
}

void check_inputs(const ParamVector& lam, const StateVector& x0, double dt) {
  require_same_size(lam.size(), x0.size(), "integrate");
  if (x0.cube_violation() > kCubeTolerance) {
    throw Error(ErrorCode::InvalidArgument, "initial state must lie in [0,1]^n");
  }
  if (!(dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "dt must be > 0");
}

}  // namespace

Trajectory integrate(const ParamVector& lam, const StateVector& x0, double t_end, double dt) {
  check_inputs(lam, x0, dt);
  if (!(t_end > 0.0)) throw Error(ErrorCode::InvalidArgument, "t_end must be > 0");

  // Step count fixed up front so t never accumulates roundoff.
  const auto steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
  Trajectory traj{{}, {}, lam};
  traj.times.reserve(steps + 1);
  traj.states.reserve(steps + 1);
  traj.times.push_back(0.0);
  traj.states.push_back(x0);

  Rk4Stepper stepper(lam);
  std::vector<double> x(x0.values().begin(), x0.values().end());
  for (std::size_t k = 1; k <= steps; ++k) {
    const double t_prev = static_cast<double>(k - 1) * dt;
    const double t = k == steps ? t_end : static_cast<double>(k) * dt;
    stepper.step(x, t - t_prev);
    check_band(x, t);
    traj.times.push_back(t);
    traj.states.emplace_back(x, Bounds::Unchecked);
  }
  return traj;
}

namespace {

// Shared loop for the tolerance-stopped variants; `record` sees every state.
template <typename Record>
double run_until(const ParamVector& lam, const StateVector& x0, double tol, double t_max, double dt,
                 std::vector<double>& x, Record&& record) {
  check_inputs(lam, x0, dt);
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be > 0");
  if (!(t_max > 0.0)) throw Error(ErrorCode::InvalidArgument, "t_max must be > 0");

  Rk4Stepper stepper(lam);
  x.assign(x0.values().begin(), x0.values().end());
  double norm = stepper.field_norm(x);
  std::size_t k = 0;
  double t = 0.0;
  while (norm > tol) {
    if (t >= t_max) {
      throw Error(ErrorCode::Timeout, "field norm " + std::to_string(norm) + " still above " +
                                          std::to_string(tol) + " at t_max = " + std::to_string(t_max));
    }
    stepper.step(x, dt);
    ++k;
    t = static_cast<double>(k) * dt;
    check_band(x, t);
    record(t, x);
    norm = stepper.field_norm(x);
  }
  return norm;
}

}  // namespace

Trajectory integrate_to_tolerance(const ParamVector& lam, const StateVector& x0, double tol,
                                  double t_max, double dt) {
  Trajectory traj{{0.0}, {x0}, lam};
  std::vector<double> x;
  run_until(lam, x0, tol, t_max, dt, x, [&](double t, const std::vector<double>& state) {
    traj.times.push_back(t);
    traj.states.emplace_back(state, Bounds::Unchecked);
  });
  return traj;
}

ConvergenceResult converge_to_equilibrium(const ParamVector& lam, const StateVector& x0, double tol,
                                          double t_max, double dt) {
  std::vector<double> x;
  double t_final = 0.0;
  const double norm = run_until(lam, x0, tol, t_max, dt, x,
                                [&](double t, const std::vector<double>&) { t_final = t; });
  return {StateVector(std::move(x), Bounds::Unchecked), t_final, norm};
}

}  // namespace ringflow
