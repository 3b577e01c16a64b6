#include "support.hpp"

#include <chrono>
#include <numeric>

#include "ringflow/fibers.hpp"
#include "ringflow/homotopy.hpp"
#include "ringflow/jacobians.hpp"

using namespace ringflow;
using namespace ringflow::testing;

namespace {

HomotopyProblem fig_problem() { return HomotopyProblem::from_unit(ParamVector(kFigLambda), 1.0); }

}  // namespace

TEST_CASE("start point") {
  const StateVector a = start_point(3, 1.0);
  for (double v : a.values()) CHECK(v == doctest::Approx(1.0 / 3.0).epsilon(1e-16));
  const StateVector half = start_point(100, 50.0);
  for (double v : half.values()) CHECK(v == 0.5);
  const StateVector high = start_point(4, 3.999);
  for (double v : high.values()) CHECK(v == doctest::Approx(0.99975).epsilon(1e-15));
  CHECK_THROWS_AS(start_point(3, 0.0), Error);
  CHECK_THROWS_AS(start_point(3, 3.0), Error);
  CHECK_THROWS_AS(start_point(3, -1.0), Error);
}

TEST_CASE("problem validation") {
  CHECK_THROWS_AS(HomotopyProblem(ParamVector::ones(3), ParamVector::ones(4), 1.0), Error);
  CHECK_THROWS_AS(HomotopyProblem::from_unit(ParamVector::ones(3), 3.0), Error);
  CHECK(HomotopyProblem::from_unit(ParamVector::ones(3), 5e-7).near_boundary());
  CHECK(HomotopyProblem::from_unit(ParamVector::ones(3), 3.0 - 5e-7).near_boundary());
  CHECK_FALSE(HomotopyProblem::from_unit(ParamVector::ones(3), 1.0).near_boundary());

  TracerOptions bad;
  bad.min_step = 0.5;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = {};
  bad.max_step = 2.0;
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("homotopy residual") {
  const HomotopyProblem prob = fig_problem();
  for (double v : homotopy_residual(prob, start_point(3, 1.0), 0.0)) CHECK(std::abs(v) < 1e-16);
  CHECK(max_abs(homotopy_residual(prob, StateVector(kFigE1), 1.0)) <= 2e-5);
  CHECK(max_abs(homotopy_residual(prob, StateVector(kFigE1Refined), 1.0)) <= 1e-14);
  CHECK_THROWS_AS(homotopy_residual(prob, StateVector(kFigE1), 1.5), Error);
}

TEST_CASE("property: H(e,t) is the convex combination of the endpoint systems") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int k = 0; k < 500; ++k) {
    const std::size_t n = 2 + k % 8;
    const HomotopyProblem prob(random_params(n, rng), random_params(n, rng), 0.5 * double(n));
    const StateVector e = random_interior(n, rng, 0.0, 1.0);
    const double t = unit(rng);
    const auto h = homotopy_residual(prob, e, t);
    const auto g1 = augmented_residual(prob.lam_start(), e, prob.s());
    const auto g2 = augmented_residual(prob.lam_end(), e, prob.s());
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(std::abs(h[i] - ((1 - t) * g1[i] + t * g2[i])) <= 1e-14 * std::max(1.0, max_abs(g1) + max_abs(g2)));
    }
  }
}

TEST_CASE("path tangent") {
  SUBCASE("identical endpoints give a zero tangent") {
    const HomotopyProblem prob(ParamVector::ones(4), ParamVector::ones(4), 2.0);
    for (double v : path_tangent(prob, start_point(4, 2.0), 0.3)) CHECK(v == 0.0);
  }
  SUBCASE("tangent stays in the hyperplane and matches finite differences along the path") {
    const HomotopyProblem prob = fig_problem();
    TracerOptions tight;
    tight.corrector_tol = 1e-13;
    tight.max_corrector_iters = 20;
    const PathTrace trace = trace_path(prob, TracerOptions{});
    REQUIRE(trace.status == TraceStatus::Converged);
    for (const PathNode& node : trace.nodes) {
      if (node.t >= 1.0) continue;
      const auto v = path_tangent(prob, node.e, node.t);
      CHECK(std::abs(std::accumulate(v.begin(), v.end(), 0.0)) <= 1e-10);

      const double h = 1e-5;
      const StateVector here = newton_correct(prob.lam_at(node.t), prob.s(), node.e, tight);
      const StateVector ahead = newton_correct(prob.lam_at(node.t + h), prob.s(), here, tight);
      for (std::size_t i = 0; i < 3; ++i) {
        CHECK(std::abs((ahead[i] - here[i]) / h - v[i]) <= 1e-4 * std::max(1.0, std::abs(v[i])));
      }
    }
  }
}

TEST_CASE("Newton correction") {
  const TracerOptions opts;
  SUBCASE("unit rates snap to the diagonal") {
    const StateVector e = newton_correct(ParamVector::ones(3), 1.0, StateVector({0.34, 0.33, 0.33}), opts);
    for (double v : e.values()) CHECK(std::abs(v - 1.0 / 3.0) <= 1e-10);
  }
  SUBCASE("figure instance from a perturbed guess") {
    std::vector<double> guess = kFigE1;
    guess[0] += 1e-3;
    guess[1] -= 4e-4;
    guess[2] += 2e-4;
    const StateVector e = newton_correct(ParamVector(kFigLambda), 1.0, StateVector(guess), opts);
    CHECK(max_abs_diff(e.values(), kFigE1Refined) <= 1e-8);
    CHECK(max_abs_diff(e.values(), kFigE1) <= 1e-5);
  }
  SUBCASE("quadratic convergence") {
    TracerOptions deep = opts;
    deep.corrector_tol = 1e-15;
    deep.max_corrector_iters = 10;
    std::vector<double> guess = kFigE1;
    guess[0] += 2e-2;
    guess[1] -= 2e-2;
    const CorrectorResult r = newton_iterate(ParamVector(kFigLambda), 1.0, guess, deep);
    const auto& hist = r.residual_history;
    REQUIRE(hist.size() >= 4);
    // residual_{k+1} <= C residual_k^2 while above roundoff
    for (std::size_t k = 0; k + 1 < hist.size(); ++k) {
      if (hist[k + 1] < 1e-13) break;
      CHECK(hist[k + 1] <= 50.0 * hist[k] * hist[k]);
    }
  }
  SUBCASE("iteration cap is reported") {
    TracerOptions one = opts;
    one.max_corrector_iters = 1;
    std::vector<double> guess{0.6, 0.2, 0.2};
    try {
      newton_correct(ParamVector(kFigLambda), 1.0, StateVector(guess), one);
      FAIL("expected NoConvergence");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NoConvergence);
    }
  }
}

TEST_CASE("figure path") {
  const auto start = std::chrono::steady_clock::now();
  const PathTrace trace = trace_path(fig_problem(), TracerOptions{});
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  REQUIRE(trace.status == TraceStatus::Converged);
  CHECK(secs < 1.0);
  CHECK(trace.nodes.front().t == 0.0);
  CHECK(trace.nodes.back().t == 1.0);
  CHECK(max_abs_diff(trace.nodes.back().e.values(), kFigE1) <= 1e-5);
  CHECK(max_abs_diff(trace.nodes.back().e.values(), kFigE1Refined) <= 1e-9);
  for (std::size_t k = 0; k < trace.nodes.size(); ++k) {
    const PathNode& node = trace.nodes[k];
    if (k > 0) CHECK(node.t > trace.nodes[k - 1].t);
    CHECK(std::abs(first_integral(node.e) - 1.0) <= 1e-9);
    CHECK(node.residual_norm <= 1e-10);
    CHECK(node.det_w != 0.0);
    CHECK(lu_determinant(augmented_W(fig_problem().lam_at(node.t), node.e)) != 0.0);
  }
}

TEST_CASE("constant problem gives a constant path") {
  const PathTrace trace = trace_path(HomotopyProblem(ParamVector::ones(5), ParamVector::ones(5), 2.0), {});
  REQUIRE(trace.status == TraceStatus::Converged);
  for (const PathNode& node : trace.nodes) {
    for (double v : node.e.values()) CHECK(v == doctest::Approx(0.4).epsilon(1e-15));
  }
}

TEST_CASE("non-unit start rates") {
  std::mt19937_64 rng(32);
  const ParamVector a = random_params(4, rng), b = random_params(4, rng);
  const PathTrace trace = trace_path(HomotopyProblem(a, b, 1.7), {});
  REQUIRE(trace.status == TraceStatus::Converged);
  CHECK(max_abs_diff(trace.nodes.back().e.values(), equilibrium_at(b, 1.7).values()) <= 1e-8);
}

TEST_CASE("stiff fiber targets stay on the in-cube branch") {
  // Targets near the faces give rates spanning several decades; the path
  // bends sharply near t = 1 and the tracer must not settle on an outside root.
  std::mt19937_64 rng(47);
  for (int k = 0; k < 30; ++k) {
    const StateVector target = random_interior(50, rng, 1e-3, 1.0 - 1e-3);
    const FiberDirection d = fiber_direction(target);
    const PathTrace trace = trace_path(HomotopyProblem::from_unit(d.omega, first_integral(target)), {});
    REQUIRE(trace.status == TraceStatus::Converged);
    for (const PathNode& node : trace.nodes) CHECK(node.e.cube_violation() <= 1e-9);
    CHECK(max_abs_diff(trace.nodes.back().e.values(), target.values()) <= 1e-7);
  }
}

TEST_CASE("step underflow and step budget are reported") {
  TracerOptions opts;
  opts.max_corrector_iters = 1;
  opts.corrector_tol = 1e-15;
  opts.min_step = 1e-3;
  opts.initial_step = 1e-2;
  const PathTrace under = trace_path(fig_problem(), opts);
  CHECK(under.status == TraceStatus::StepUnderflow);
  CHECK(under.rejected_steps > 0);
  try {
    equilibrium_at(ParamVector(kFigLambda), 1.0, opts);
    FAIL("expected StepUnderflow");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::StepUnderflow);
  }

  TracerOptions few;
  few.max_steps = 3;
  CHECK(trace_path(fig_problem(), few).status == TraceStatus::MaxSteps);
}

TEST_CASE("equilibrium_at") {
  const StateVector diag = equilibrium_at(ParamVector::ones(6), 2.4);
  for (double v : diag.values()) CHECK(v == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(max_abs_diff(equilibrium_at(ParamVector(kFigLambda), 1.0).values(), kFigE1) <= 1e-5);

  std::mt19937_64 rng(33);
  for (int k = 0; k < 5; ++k) {
    const ParamVector lam = random_params(5, rng);
    const auto base = equilibrium_at(lam, 2.2);
    CHECK(equilibrium_residual(lam, base).norm_inf() <= 1e-9);
    for (double c : {0.1, 7.0}) {
      CHECK(max_abs_diff(equilibrium_at(lam.scaled(c), 2.2).values(), base.values()) <= 1e-8);
    }
  }
}

TEST_CASE("hyperplanes close to the corners") {
  std::mt19937_64 rng(34);
  const ParamVector lam = random_params(4, rng);
  for (double s : {1e-3, 3.999}) {
    const PathTrace trace = trace_path(HomotopyProblem::from_unit(lam, s), {});
    REQUIRE(trace.status == TraceStatus::Converged);
    CHECK(equilibrium_residual(lam, trace.nodes.back().e).norm_inf() <= 1e-9);
  }
}
