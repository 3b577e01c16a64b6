#include "ringflow/linalg.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>

namespace ringflow {

double lu_determinant(const DenseMatrix& m) {
  return Eigen::PartialPivLU<Eigen::MatrixXd>(m).determinant();
}

SingularRange singular_range(const DenseMatrix& m) {
  if (m.size() == 0) return {};
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  return {sv(sv.size() - 1), sv(0)};
}

}  // namespace ringflow
