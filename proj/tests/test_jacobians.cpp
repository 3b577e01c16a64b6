#include "support.hpp"

#include "ringflow/jacobians.hpp"
#include "ringflow/oracle.hpp"

using namespace ringflow;
using namespace ringflow::testing;

TEST_CASE("J_lambda at the corners and at the symmetric point") {
  CHECK(jac_lambda(ParamVector({2, 3, 4}), StateVector::constant(3, 0.0)).isZero(0.0));
  CHECK(jac_lambda(ParamVector({2, 3, 4}), StateVector::constant(3, 1.0)).isZero(0.0));
  DenseMatrix expected(2, 3);
  expected << -0.25, 0, 0.25, 0, -0.25, 0.25;
  CHECK(jac_lambda(ParamVector::ones(3), StateVector::constant(3, 0.5)) == expected);
}

TEST_CASE("J_e at the empty state is in row echelon form with pivots -lambda_i") {
  const ParamVector lam({1.5, 2.5, 0.7, 3.0, 0.9});
  const DenseMatrix j = jac_e(lam, StateVector::constant(5, 0.0));
  for (Eigen::Index i = 0; i < j.rows(); ++i) {
    CHECK(j(i, i) == doctest::Approx(-lam[static_cast<std::size_t>(i)]));
    for (Eigen::Index c = 0; c < i; ++c) CHECK(j(i, c) == 0.0);
  }
}

TEST_CASE("reduced matrix A at the symmetric point") {
  DenseMatrix expected(2, 2);
  expected << 0.5, 0.5, -0.5, 1.0;
  const DenseMatrix a = reduced_matrix_A(ParamVector::ones(3), StateVector::constant(3, 0.5));
  CHECK((a - expected).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(det_A_closed_form(ParamVector::ones(3), StateVector::constant(3, 0.5)) == doctest::Approx(0.75));
  CHECK(lu_determinant(a) == doctest::Approx(0.75));
}

TEST_CASE("A is J_e without its first column") {
  std::mt19937_64 rng(3);
  for (std::size_t n : {2u, 3u, 6u}) {
    const ParamVector lam = random_params(n, rng);
    const StateVector e = random_interior(n, rng);
    const DenseMatrix j = jac_e(lam, e);
    CHECK(reduced_matrix_A(lam, e) == j.rightCols(j.cols() - 1));
  }
}

TEST_CASE("closed-form det(A) at the corners") {
  CHECK(det_A_closed_form(ParamVector::ones(4), StateVector::constant(4, 0.0)) == 1.0);
  const ParamVector lam({1.5, 2.0, 0.5, 3.0});
  // all-one state: only the product of lambda_j e_j survives
  CHECK(det_A_closed_form(lam, StateVector::constant(4, 1.0)) == doctest::Approx(1.5 * 2.0 * 0.5));
  CHECK_THROWS_AS(det_A_closed_form(ParamVector::ones(2), StateVector::constant(2, 0.5)), Error);
}

TEST_CASE("closed-form det(A) agrees with LU; the two-term form is a lower bound") {
  std::mt19937_64 rng(4);
  for (std::size_t n : {3u, 4u, 5u, 8u, 20u}) {
    for (int k = 0; k < 200; ++k) {
      const ParamVector lam = random_params(n, rng, 1e-2, 10.0);
      const StateVector e = random_interior(n, rng, 1e-3, 1.0 - 1e-3);
      const double closed = det_A_closed_form(lam, e);
      const double lu = lu_determinant(reduced_matrix_A(lam, e));
      REQUIRE(closed > 0.0);
      CHECK(std::abs(std::abs(lu) - closed) <= 1e-10 * closed);
      const double two = det_A_two_term(lam, e);
      CHECK(two > 0.0);
      if (n == 3) {
        CHECK(std::abs(two - closed) <= 1e-13 * closed);
      } else {
        CHECK(two < closed);
      }
    }
  }
}

TEST_CASE("W is J_e over a row of ones; golden determinant at the unit start point") {
  const DenseMatrix w = augmented_W(ParamVector::ones(3), StateVector::constant(3, 1.0 / 3.0));
  CHECK(w.row(2) == Eigen::RowVector3d::Ones());
  CHECK(w.topRows(2) == jac_e(ParamVector::ones(3), StateVector::constant(3, 1.0 / 3.0)));
  // [[-1, 1/3, 2/3], [-1/3, -2/3, 1], [1, 1, 1]] has determinant 7/3.
  CHECK(lu_determinant(w) == doctest::Approx(7.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("analytic Jacobians match central differences") {
  std::mt19937_64 rng(5);
  for (std::size_t n : {2u, 3u, 5u, 10u}) {
    for (int k = 0; k < 200; ++k) {
      const ParamVector lam = random_params(n, rng);
      const StateVector e = random_interior(n, rng, 0.0, 1.0);
      const double dl = (jac_lambda(lam, e) - fd_jacobian(JacobianWrt::Lambda, lam, e)).cwiseAbs().maxCoeff();
      const double de = (jac_e(lam, e) - fd_jacobian(JacobianWrt::E, lam, e)).cwiseAbs().maxCoeff();
      CHECK(dl < 1e-7);
      CHECK(de < 1e-7);
    }
  }
}

TEST_CASE("rank certificates") {
  std::mt19937_64 rng(6);
  SUBCASE("J_e has full rank on interior samples") {
    for (std::size_t n : {3u, 10u, 50u}) {
      for (int k = 0; k < 20; ++k) {
        const RankCertificate c = rank_certificate(MatrixKind::JE, random_params(n, rng), random_interior(n, rng));
        CHECK(c.full_rank);
        CHECK(c.smallest_singular_value > 1e-10);
        CHECK_FALSE(c.determinant.has_value());
      }
    }
  }
  SUBCASE("J_lambda vanishes at the empty state") {
    const RankCertificate c = rank_certificate(MatrixKind::JLambda, ParamVector::ones(4), StateVector::constant(4, 0.0));
    CHECK_FALSE(c.full_rank);
    CHECK(c.smallest_singular_value == 0.0);
  }
  SUBCASE("J_lambda has rank n-1 inside the cube") {
    const RankCertificate c = rank_certificate(MatrixKind::JLambda, random_params(6, rng), random_interior(6, rng));
    CHECK(c.full_rank);
  }
  SUBCASE("J_e keeps full rank at the corners") {
    for (double v : {0.0, 1.0}) {
      CHECK(rank_certificate(MatrixKind::JE, random_params(5, rng), StateVector::constant(5, v)).full_rank);
    }
  }
  SUBCASE("square kinds carry a determinant") {
    const ParamVector lam = random_params(5, rng);
    const StateVector e = random_interior(5, rng);
    const RankCertificate a = rank_certificate(MatrixKind::A, lam, e);
    REQUIRE(a.determinant.has_value());
    CHECK(*a.determinant == doctest::Approx(det_A_closed_form(lam, e)).epsilon(1e-10));
    CHECK(rank_certificate(MatrixKind::W, lam, e).determinant.has_value());
  }
  SUBCASE("bad arguments") {
    CHECK_THROWS_AS(rank_certificate(MatrixKind::JE, ParamVector::ones(3), StateVector::constant(3, 0.5), 0.0), Error);
    CHECK_THROWS_AS(parse_matrix_kind("Q"), Error);
    CHECK(parse_matrix_kind("W") == MatrixKind::W);
  }
}
