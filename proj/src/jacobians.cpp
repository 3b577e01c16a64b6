#include "ringflow/jacobians.hpp"

#include <string>

namespace ringflow {

namespace detail {

void fill_jac_e(std::span<const double> lam, std::span<const double> e, DenseMatrix& out) {
  const std::size_t n = e.size();
  out.setZero();
  // Row i differentiates lambda_n e_n (1 - e_1) - lambda_i e_i (1 - e_{i+1}).
  const double d_anchor_first = -lam[n - 1] * e[n - 1];
  const double d_anchor_last = lam[n - 1] * (1.0 - e[0]);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    out(r, 0) += d_anchor_first;
    out(r, static_cast<Eigen::Index>(n - 1)) += d_anchor_last;
    out(r, r) += -lam[i] * (1.0 - e[i + 1]);
    out(r, r + 1) += lam[i] * e[i];
  }
}

void fill_augmented_W(std::span<const double> lam, std::span<const double> e, DenseMatrix& out) {
  const auto n = static_cast<Eigen::Index>(e.size());
  auto top = out.topRows(n - 1);
  DenseMatrix j(n - 1, n);
  fill_jac_e(lam, e, j);
  top = j;
  out.row(n - 1).setOnes();
}

}  // namespace detail

DenseMatrix jac_lambda(const ParamVector& lam, const StateVector& e) {
  require_same_size(lam.size(), e.size(), "jac_lambda");
  const std::size_t n = e.size();
  const auto last = static_cast<Eigen::Index>(n - 1);
  DenseMatrix out = DenseMatrix::Zero(last, last + 1);
  const double anchor = e[n - 1] * (1.0 - e[0]);
  for (Eigen::Index i = 0; i < last; ++i) {
    const auto k = static_cast<std::size_t>(i);
    out(i, i) = -e[k] * (1.0 - e[k + 1]);
    out(i, last) = anchor;
  }
  return out;
}

DenseMatrix jac_e(const ParamVector& lam, const StateVector& e) {
  require_same_size(lam.size(), e.size(), "jac_e");
  const auto n = static_cast<Eigen::Index>(e.size());
  DenseMatrix out(n - 1, n);
  detail::fill_jac_e(lam.values(), e.values(), out);
  return out;
}

DenseMatrix reduced_matrix_A(const ParamVector& lam, const StateVector& e) {
  const DenseMatrix j = jac_e(lam, e);
  return j.rightCols(j.cols() - 1);
}

namespace {

void require_n3(const ParamVector& lam, const StateVector& e, const char* what) {
  require_same_size(lam.size(), e.size(), what);
  if (e.size() < 3) {
    throw Error(ErrorCode::InvalidArgument, std::string(what) + " requires n >= 3");
  }
}

}  // namespace

double det_A_closed_form(const ParamVector& lam, const StateVector& e) {
  require_n3(lam, e, "det_A_closed_form");
  const std::size_t n = e.size();
  const std::size_t m = n - 1;  // size of A
  // suffix[k] = prod_{j=k+1}^{m-1} lambda_j (1 - e_{j+1}) in 0-based terms
  std::vector<double> suffix(m, 1.0);
  for (std::size_t k = m - 1; k-- > 0;) {
    suffix[k] = suffix[k + 1] * lam[k + 1] * (1.0 - e[k + 2]);
  }
  const double column = lam[n - 1] * (1.0 - e[0]);
  double prefix = 1.0;  // prod_{j<k} lambda_j e_j
  double sum = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    sum += prefix * suffix[k];
    prefix *= lam[k] * e[k];
  }
  return prefix + column * sum;
}

double det_A_two_term(const ParamVector& lam, const StateVector& e) {
  require_n3(lam, e, "det_A_two_term");
  const std::size_t n = e.size();
  double middle = 1.0;
  for (std::size_t j = 1; j + 2 < n; ++j) middle *= lam[j] * e[j];
  double lower = 1.0;
  for (std::size_t j = 1; j + 1 < n; ++j) lower *= lam[j] * (1.0 - e[j + 1]);
  const double column = lam[n - 1] * (1.0 - e[0]);
  return lam[0] * e[0] * middle * (column + lam[n - 2] * e[n - 2]) + column * lower;
}

DenseMatrix augmented_W(const ParamVector& lam, const StateVector& e) {
  require_same_size(lam.size(), e.size(), "augmented_W");
  const auto n = static_cast<Eigen::Index>(e.size());
  DenseMatrix out(n, n);
  detail::fill_augmented_W(lam.values(), e.values(), out);
  return out;
}

std::string_view to_string(MatrixKind kind) {
  switch (kind) {
    case MatrixKind::JLambda: return "JLambda";
    case MatrixKind::JE: return "JE";
    case MatrixKind::A: return "A";
    case MatrixKind::W: return "W";
  }
  return "Unknown";
}

MatrixKind parse_matrix_kind(std::string_view name) {
  if (name == "JLambda") return MatrixKind::JLambda;
  if (name == "JE") return MatrixKind::JE;
  if (name == "A") return MatrixKind::A;
  if (name == "W") return MatrixKind::W;
  throw Error(ErrorCode::InvalidArgument, "unknown matrix kind '" + std::string(name) + "'");
}

DenseMatrix build_matrix(MatrixKind kind, const ParamVector& lam, const StateVector& e) {
  switch (kind) {
    case MatrixKind::JLambda: return jac_lambda(lam, e);
    case MatrixKind::JE: return jac_e(lam, e);
    case MatrixKind::A: return reduced_matrix_A(lam, e);
    case MatrixKind::W: return augmented_W(lam, e);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown matrix kind");
}

RankCertificate rank_certificate(MatrixKind kind, const ParamVector& lam, const StateVector& e,
                                 double relative_threshold) {
  if (!(relative_threshold > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "rank threshold must be > 0");
  }
  const DenseMatrix m = build_matrix(kind, lam, e);
  const SingularRange sv = singular_range(m);
  RankCertificate cert{kind, sv.smallest, sv.largest, relative_threshold * sv.largest,
                       std::nullopt, false};
  cert.full_rank = cert.smallest_singular_value > cert.threshold;
  if (m.rows() == m.cols()) cert.determinant = lu_determinant(m);
  return cert;
}

}  // namespace ringflow
