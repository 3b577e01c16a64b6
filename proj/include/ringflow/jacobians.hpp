#pragma once

#include <optional>
#include <string_view>

#include "ringflow/core_model.hpp"
#include "ringflow/linalg.hpp"

namespace ringflow {

/// d f / d lambda, (n-1) x n.
DenseMatrix jac_lambda(const ParamVector& lam, const StateVector& e);

/// d f / d e, (n-1) x n.
DenseMatrix jac_e(const ParamVector& lam, const StateVector& e);

/// jac_e without its first column, (n-1) x (n-1).
DenseMatrix reduced_matrix_A(const ParamVector& lam, const StateVector& e);

// det(A) in closed form. A is lower bidiagonal (diagonal lambda_i e_i,
// subdiagonal -lambda_i (1 - e_{i+1})) plus the constant column
// lambda_n (1 - e_1) added to its last column, which gives
//
//   det A = prod_{j<n} lambda_j e_j
//         + lambda_n (1 - e_1) * sum_{k=1}^{n-1} prod_{j<k} lambda_j e_j
//                                             * prod_{j=k+1}^{n-1} lambda_j (1 - e_{j+1})
//
// Every term is nonnegative, and the sum is positive on [0,1]^n. Requires n >= 3.
double det_A_closed_form(const ParamVector& lam, const StateVector& e);

// Only the k = n-1 and k = 1 terms of the sum above. Equal to det A for n = 3
// and a strict lower bound for n >= 4 at interior points.
double det_A_two_term(const ParamVector& lam, const StateVector& e);

/// jac_e stacked over a row of ones, n x n: the Jacobian of (f, sum(e) - s).
DenseMatrix augmented_W(const ParamVector& lam, const StateVector& e);

enum class MatrixKind { JLambda, JE, A, W };

std::string_view to_string(MatrixKind kind);
MatrixKind parse_matrix_kind(std::string_view name);

DenseMatrix build_matrix(MatrixKind kind, const ParamVector& lam, const StateVector& e);

inline constexpr double kDefaultRankThreshold = 1e-10;

struct RankCertificate {
  MatrixKind matrix_kind;
  double smallest_singular_value;
  double largest_singular_value;
  /// Absolute threshold used: relative_threshold * ||M||_2.
  double threshold;
  std::optional<double> determinant;  // square kinds only
  bool full_rank;
};

/// full_rank iff sigma_min > relative_threshold * sigma_max.
RankCertificate rank_certificate(MatrixKind kind, const ParamVector& lam, const StateVector& e,
                                 double relative_threshold = kDefaultRankThreshold);

namespace detail {

// Raw-buffer form of jac_e / augmented_W for the Newton loops; writes into out
// which must already have the right shape.
void fill_jac_e(std::span<const double> lam, std::span<const double> e, DenseMatrix& out);
void fill_augmented_W(std::span<const double> lam, std::span<const double> e, DenseMatrix& out);

}  // namespace detail

}  // namespace ringflow
