#pragma once

#include "fseval/types.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace fseval {

template <typename Scalar>
struct PrincipalBasis {
  Matrix<Scalar> components;            // m x d, orthonormal rows
  Vector<Scalar> explained_variance;    // non-increasing
};

// Top-m eigenvectors of the sample covariance of X. Each component's
// largest-magnitude coordinate (first one on ties) is made positive.
template <typename Derived>
PrincipalBasis<ScalarOf<Derived>> principal_basis(const Eigen::MatrixBase<Derived>& X, Index m) {
  using Scalar = ScalarOf<Derived>;
  const Index n = X.rows();
  const Index d = X.cols();
  if (m < 1 || m > std::min(n - 1, d))
    throw Error("principal_basis: m must be in [1, min(n_instances - 1, n_features)]");

  const Matrix<Scalar> centered = X.rowwise() - X.colwise().mean();
  Matrix<Scalar> cov = Matrix<Scalar>::Zero(d, d);
  // Only the lower triangle is filled; the solver reads nothing else.
  cov.template selfadjointView<Eigen::Lower>().rankUpdate(centered.transpose(),
                                                          Scalar(1) / Scalar(n - 1));

  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> solver(cov);
  if (solver.info() != Eigen::Success) throw Error("principal_basis: eigen decomposition failed");

  PrincipalBasis<Scalar> basis;
  basis.components.resize(m, d);
  basis.explained_variance.resize(m);
  // Eigenvalues come back ascending.
  for (Index i = 0; i < m; ++i) {
    const Index src = d - 1 - i;
    Vector<Scalar> v = solver.eigenvectors().col(src);
    Index pivot = 0;
    v.cwiseAbs().maxCoeff(&pivot);
    if (v(pivot) < Scalar(0)) v = -v;
    basis.components.row(i) = v.transpose();
    basis.explained_variance(i) = std::max(solver.eigenvalues()(src), Scalar(0));
  }
  return basis;
}

// Angle between the lines spanned by unit vectors a and b, in [0, pi/2].
// Equal to arccos(min(1, |a.b|)) but exact at 0 for identical inputs.
template <typename DerivedA, typename DerivedB>
ScalarOf<DerivedA> line_angle(const Eigen::MatrixBase<DerivedA>& a,
                              const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = ScalarOf<DerivedA>;
  const Scalar s = a.dot(b) < Scalar(0) ? Scalar(-1) : Scalar(1);
  const Scalar diff = (a - s * b).norm();
  const Scalar sum = (a + s * b).norm();
  return Scalar(2) * std::atan2(diff, sum);
}

}  // namespace fseval
