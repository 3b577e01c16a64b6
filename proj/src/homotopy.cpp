#include "ringflow/homotopy.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ringflow/jacobians.hpp"
#include "ringflow/linalg.hpp"

namespace ringflow {

void TracerOptions::validate() const {
  if (!(min_step > 0.0 && min_step <= initial_step && initial_step <= max_step && max_step <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument,
                "step sizes must satisfy 0 < min_step <= initial_step <= max_step <= 1");
  }
  if (!(corrector_tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "corrector_tol must be > 0");
  if (max_corrector_iters == 0) throw Error(ErrorCode::InvalidArgument, "max_corrector_iters must be >= 1");
  if (max_steps == 0) throw Error(ErrorCode::InvalidArgument, "max_steps must be >= 1");
}

namespace {

void check_s(std::size_t n, double s) {
  if (!(s > 0.0 && s < static_cast<double>(n))) {
    throw Error(ErrorCode::InvalidArgument,
                "first integral s = " + std::to_string(s) + " must lie in (0, " + std::to_string(n) + ")");
  }
}

// g(lam, e) into out (length n).
void fill_g(std::span<const double> lam, std::span<const double> e, double s, Eigen::VectorXd& out) {
  const std::size_t n = e.size();
  detail::residual(lam, e, std::span<double>(out.data(), n - 1));
  out(static_cast<Eigen::Index>(n - 1)) = std::accumulate(e.begin(), e.end(), 0.0) - s;
}

double cube_violation(const Eigen::VectorXd& e) {
  return std::max({0.0, -e.minCoeff(), e.maxCoeff() - 1.0});
}

constexpr double kCubeEscape = 0.1;
constexpr double kPathCubeSlack = 1e-9;

}  // namespace

HomotopyProblem::HomotopyProblem(ParamVector lam_start, ParamVector lam_end, double s)
    : lam_start_(std::move(lam_start)), lam_end_(std::move(lam_end)), s_(s) {
  require_same_size(lam_start_.size(), lam_end_.size(), "HomotopyProblem");
  const auto n = static_cast<double>(lam_start_.size());
  check_s(lam_start_.size(), s);
  near_boundary_ = s < kNearBoundarySlack || s > n - kNearBoundarySlack;
}

HomotopyProblem HomotopyProblem::from_unit(ParamVector lam_end, double s) {
  const std::size_t n = lam_end.size();
  return {ParamVector::ones(n), std::move(lam_end), s};
}

ParamVector HomotopyProblem::lam_at(double t) const {
  std::vector<double> out(size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (1.0 - t) * lam_start_[i] + t * lam_end_[i];
  return ParamVector(std::move(out));
}

std::string_view to_string(TraceStatus status) {
  switch (status) {
    case TraceStatus::Converged: return "Converged";
    case TraceStatus::StepUnderflow: return "StepUnderflow";
    case TraceStatus::MaxSteps: return "MaxSteps";
  }
  return "Unknown";
}

StateVector start_point(std::size_t n, double s) {
  check_s(n, s);
  return StateVector::constant(n, s / static_cast<double>(n));
}

std::vector<double> augmented_residual(const ParamVector& lam, const StateVector& e, double s) {
  require_same_size(lam.size(), e.size(), "augmented_residual");
  Eigen::VectorXd g(static_cast<Eigen::Index>(e.size()));
  fill_g(lam.values(), e.values(), s, g);
  return to_std(g);
}

std::vector<double> homotopy_residual(const HomotopyProblem& prob, const StateVector& e, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw Error(ErrorCode::InvalidArgument, "t must lie in [0,1]");
  return augmented_residual(prob.lam_at(t), e, prob.s());
}

std::vector<double> path_tangent(const HomotopyProblem& prob, const StateVector& e, double t) {
  require_same_size(prob.size(), e.size(), "path_tangent");
  const auto n = static_cast<Eigen::Index>(e.size());
  // g is linear in lambda, so dH/dt = g(lam_end, e) - g(lam_start, e); the
  // hyperplane row cancels.
  Eigen::VectorXd g_end(n), g_start(n);
  fill_g(prob.lam_end().values(), e.values(), prob.s(), g_end);
  fill_g(prob.lam_start().values(), e.values(), prob.s(), g_start);
  Eigen::VectorXd rhs = g_start - g_end;
  rhs(n - 1) = 0.0;

  DenseMatrix w(n, n);
  detail::fill_augmented_W(prob.lam_at(t).values(), e.values(), w);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(w);
  const double det = lu.determinant();
  if (!std::isfinite(det) || det == 0.0 || lu.rcond() < 1e-14) {
    const SingularRange sv = singular_range(w);
    throw Error(ErrorCode::SingularMatrix,
                "W is singular at t = " + std::to_string(t) + " (det " + std::to_string(det) +
                    ", sigma_min " + std::to_string(sv.smallest) + ", sigma_max " +
                    std::to_string(sv.largest) + ")");
  }
  return to_std(lu.solve(rhs));
}

CorrectorResult newton_iterate(const ParamVector& lam, double s, std::span<const double> guess,
                               const TracerOptions& opts) {
  require_same_size(lam.size(), guess.size(), "newton_correct");
  const auto n = static_cast<Eigen::Index>(guess.size());
  CorrectorResult result;
  Eigen::VectorXd e = as_eigen(guess);
  Eigen::VectorXd g(n);
  DenseMatrix w(n, n);
  auto span_of = [&](const Eigen::VectorXd& v) { return std::span<const double>(v.data(), guess.size()); };

  fill_g(lam.values(), span_of(e), s, g);
  result.residual_history.push_back(g.lpNorm<Eigen::Infinity>());
  while (result.residual_history.back() > opts.corrector_tol) {
    if (result.iterations == opts.max_corrector_iters) break;
    detail::fill_augmented_W(lam.values(), span_of(e), w);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(w);
    const double det = lu.determinant();
    if (!std::isfinite(det) || det == 0.0 || lu.rcond() < 1e-14) {
      result.singular = true;
      break;
    }
    e -= lu.solve(g);
    ++result.iterations;
    if (!e.allFinite() || cube_violation(e) > kCubeEscape) {
      result.left_cube = true;
      break;
    }
    fill_g(lam.values(), span_of(e), s, g);
    result.residual_history.push_back(g.lpNorm<Eigen::Infinity>());
  }
  result.converged = !result.singular && !result.left_cube &&
                     result.residual_history.back() <= opts.corrector_tol;
  result.e = to_std(e);
  return result;
}

StateVector newton_correct(const ParamVector& lam, double s, const StateVector& guess,
                           const TracerOptions& opts) {
  check_s(guess.size(), s);
  if (guess.cube_violation() > kCubeTolerance) {
    throw Error(ErrorCode::InvalidArgument, "Newton guess must lie in the closed cube");
  }
  CorrectorResult r = newton_iterate(lam, s, guess.values(), opts);
  if (r.singular) throw Error(ErrorCode::SingularMatrix, "W became singular during Newton correction");
  if (!r.converged) {
    throw Error(ErrorCode::NoConvergence,
                "Newton correction did not reach " + std::to_string(opts.corrector_tol) + " in " +
                    std::to_string(r.iterations) + " iterations" +
                    (r.left_cube ? " (iterate left the cube)" : ""));
  }
  return StateVector(std::move(r.e), Bounds::Unchecked);
}

PathTrace trace_path(const HomotopyProblem& prob, const TracerOptions& opts) {
  opts.validate();
  const std::size_t n = prob.size();
  PathTrace trace{prob.s(), prob.lam_start(), prob.lam_end(), {}, TraceStatus::MaxSteps,
                  prob.near_boundary(), 0};

  auto det_w_at = [&](const ParamVector& lam, std::span<const double> e) {
    DenseMatrix w(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    detail::fill_augmented_W(lam.values(), e, w);
    const double det = lu_determinant(w);
    if (!std::isfinite(det) || det == 0.0) {
      throw Error(ErrorCode::SingularMatrix, "W is singular at an accepted path node");
    }
    return det;
  };

  // The diagonal point is the start for any multiple of unit rates; other
  // start rates get their start from a preliminary trace out of unit rates.
  const bool diagonal_start = std::all_of(prob.lam_start().values().begin(), prob.lam_start().values().end(),
                                          [&](double v) { return v == prob.lam_start()[0]; });
  StateVector e0 = diagonal_start ? start_point(n, prob.s()) : equilibrium_at(prob.lam_start(), prob.s(), opts);
  auto residual_inf = [&](const ParamVector& lam, const StateVector& e) {
    const auto g = augmented_residual(lam, e, prob.s());
    double m = 0.0;
    for (double v : g) m = std::max(m, std::abs(v));
    return m;
  };
  trace.nodes.push_back({0.0, e0, residual_inf(prob.lam_start(), e0), det_w_at(prob.lam_start(), e0.values())});

  double t = 0.0;
  double step = opts.initial_step;
  int easy_streak = 0;
  const std::size_t easy_iters = std::max<std::size_t>(1, opts.max_corrector_iters / 2);

  for (std::size_t attempts = 0; attempts < opts.max_steps; ++attempts) {
    const StateVector& e = trace.nodes.back().e;
    const double h = std::min(step, 1.0 - t);
    const bool last = t + h >= 1.0;
    const double t_next = last ? 1.0 : t + h;

    std::vector<double> predicted(n);
    bool ok = true;
    try {
      const std::vector<double> v = path_tangent(prob, e, t);
      for (std::size_t i = 0; i < n; ++i) predicted[i] = e[i] + (t_next - t) * v[i];
    } catch (const Error& err) {
      if (err.code() != ErrorCode::SingularMatrix) throw;
      ok = false;
    }

    CorrectorResult corr;
    const ParamVector lam_next = prob.lam_at(t_next);
    if (ok) {
      corr = newton_iterate(lam_next, prob.s(), predicted, opts);
      // Equilibria stay in the cube; a corrected point outside it is a branch jump.
      ok = corr.converged && cube_violation(as_eigen(corr.e)) <= kPathCubeSlack;
    }
    if (!ok) {
      ++trace.rejected_steps;
      easy_streak = 0;
      step = h / 2.0;
      if (step < opts.min_step) {
        trace.status = TraceStatus::StepUnderflow;
        return trace;
      }
      continue;
    }

    StateVector accepted(std::move(corr.e), Bounds::Unchecked);
    const double det = det_w_at(lam_next, accepted.values());
    trace.nodes.push_back({t_next, std::move(accepted), corr.residual_history.back(), det});
    t = t_next;
    if (last) {
      trace.status = TraceStatus::Converged;
      return trace;
    }
    if (corr.iterations <= easy_iters) {
      if (++easy_streak >= 2) {
        step = std::min(step * 1.5, opts.max_step);
        easy_streak = 0;
      }
    } else {
      easy_streak = 0;
    }
  }
  trace.status = TraceStatus::MaxSteps;
  return trace;
}

StateVector equilibrium_at(const ParamVector& lam, double s, const TracerOptions& opts) {
  const PathTrace trace = trace_path(HomotopyProblem::from_unit(lam, s), opts);
  if (trace.status != TraceStatus::Converged) {
    throw Error(trace.status == TraceStatus::StepUnderflow ? ErrorCode::StepUnderflow : ErrorCode::MaxSteps,
                "continuation stopped at t = " + std::to_string(trace.nodes.back().t) + " (" +
                    std::string(to_string(trace.status)) + ")");
  }
  return trace.nodes.back().e;
}

}  // namespace ringflow
