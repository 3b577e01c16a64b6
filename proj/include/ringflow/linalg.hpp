#pragma once

#include <Eigen/Core>

#include <span>
#include <vector>

namespace ringflow {

using DenseMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Determinant by partial-pivot LU.
double lu_determinant(const DenseMatrix& m);

/// Smallest and largest singular values (over min(rows, cols) of them).
struct SingularRange {
  double smallest = 0.0;
  double largest = 0.0;
};

SingularRange singular_range(const DenseMatrix& m);

inline Eigen::Map<const Eigen::VectorXd> as_eigen(std::span<const double> v) {
  return {v.data(), static_cast<Eigen::Index>(v.size())};
}

inline std::vector<double> to_std(const Eigen::VectorXd& v) {
  return {v.data(), v.data() + v.size()};
}

}  // namespace ringflow
