// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

namespace cq {

/// Tangent/ambient vectors in the working coordinate basis.
using RealVector = Eigen::VectorXd;
/// Matrix of a linear map in the working basis (J, F, L_i, f, phi, A, ...).
using Endomorphism = Eigen::MatrixXd;

/// Symmetric positive definite Gram matrix of an inner product.
///
/// Construction validates symmetry (1e-12, relative to the largest entry) and
/// positive definiteness (Cholesky must succeed); the factor is kept for
/// adjoints and solves.
class MetricMatrix {
 public:
  explicit MetricMatrix(Eigen::MatrixXd entries);
  static MetricMatrix identity(int dim);

  int dim() const { return static_cast<int>(entries_.rows()); }
  const Eigen::MatrixXd& entries() const { return entries_; }
  double operator()(int i, int j) const { return entries_(i, j); }

  double inner(const RealVector& x, const RealVector& y) const;
  double norm(const RealVector& x) const;
  /// g^{-1} b
  RealVector solve(const RealVector& b) const;
  Eigen::MatrixXd inverse() const;
  /// Lower Cholesky factor L with g = L L^T.
  const Eigen::MatrixXd& cholesky_factor() const { return chol_; }

 private:
  Eigen::MatrixXd entries_;
  Eigen::MatrixXd chol_;
};

/// (X ^ Y)Z = g(Y,Z) X - g(X,Z) Y.
RealVector wedge_apply(const RealVector& x, const RealVector& y, const RealVector& z,
                       const MetricMatrix& g);

/// Modified Gram-Schmidt with one reorthogonalization pass.  The k-th output
/// has positive coefficient along the k-th input.  Throws DegeneracyError when a
/// remaining component drops below 1e-10 of its input norm.
std::vector<RealVector> gram_schmidt(std::span<const RealVector> basis, const MetricMatrix& g);

/// g-Frobenius norm of P - Q, i.e. sqrt(tr((P-Q)^* (P-Q))) with ^* the g-adjoint.
double op_distance(const Endomorphism& p, const Endomorphism& q, const MetricMatrix& g);

/// g-adjoint g^{-1} P^T g.
Endomorphism adjoint(const Endomorphism& p, const MetricMatrix& g);

/// ||a - b||_g / max(||b||_g, floor).  The floor keeps comparisons of
/// vanishing quantities absolute.
double relative_residual(const RealVector& a, const RealVector& b, const MetricMatrix& g,
                         double floor = 1e-12);
double relative_residual(const RealVector& a, const RealVector& b, double floor = 1e-12);

void require_same_dim(const RealVector& v, int dim, const char* what);

}  // namespace cq
