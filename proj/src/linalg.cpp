// SPDX-License-Identifier: Apache-2.0
#include "cqverify/linalg.hpp"

#include <cmath>
#include <string>

#include "cqverify/errors.hpp"

namespace cq {

MetricMatrix::MetricMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
  if (entries_.rows() == 0 || entries_.rows() != entries_.cols()) {
    throw UsageError("metric must be a non-empty square matrix");
  }
  if (!entries_.allFinite()) throw UsageError("metric has non-finite entries");
  const double scale = std::max(1.0, entries_.cwiseAbs().maxCoeff());
  if ((entries_ - entries_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw UsageError("metric is not symmetric");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(entries_);
  if (llt.info() != Eigen::Success) throw DegeneracyError("metric is not positive definite");
  chol_ = llt.matrixL();
  if ((chol_.diagonal().array() <= 0.0).any()) {
    throw DegeneracyError("metric is not positive definite");
  }
}

MetricMatrix MetricMatrix::identity(int dim) {
  return MetricMatrix(Eigen::MatrixXd::Identity(dim, dim));
}

double MetricMatrix::inner(const RealVector& x, const RealVector& y) const {
  require_same_dim(x, dim(), "inner product argument");
  require_same_dim(y, dim(), "inner product argument");
  return x.dot(entries_ * y);
}

double MetricMatrix::norm(const RealVector& x) const { return std::sqrt(std::max(0.0, inner(x, x))); }

RealVector MetricMatrix::solve(const RealVector& b) const {
  require_same_dim(b, dim(), "metric solve rhs");
  const auto l = chol_.triangularView<Eigen::Lower>();
  RealVector y = l.solve(b);
  return l.transpose().solve(y);
}

Eigen::MatrixXd MetricMatrix::inverse() const {
  const auto l = chol_.triangularView<Eigen::Lower>();
  Eigen::MatrixXd y = l.solve(Eigen::MatrixXd::Identity(dim(), dim()));
  return l.transpose().solve(y);
}

void require_same_dim(const RealVector& v, int dim, const char* what) {
  if (v.size() != dim) {
    throw UsageError(std::string(what) + ": expected dimension " + std::to_string(dim) + ", got " +
                     std::to_string(v.size()));
  }
}

RealVector wedge_apply(const RealVector& x, const RealVector& y, const RealVector& z,
                       const MetricMatrix& g) {
  return g.inner(y, z) * x - g.inner(x, z) * y;
}

std::vector<RealVector> gram_schmidt(std::span<const RealVector> basis, const MetricMatrix& g) {
  std::vector<RealVector> out;
  out.reserve(basis.size());
  for (const RealVector& v : basis) {
    require_same_dim(v, g.dim(), "gram_schmidt input");
    const double input_norm = g.norm(v);
    if (!(input_norm > 0.0)) throw DegeneracyError("gram_schmidt: zero input vector");
    RealVector w = v;
    for (int pass = 0; pass < 2; ++pass) {
      for (const RealVector& e : out) w -= g.inner(e, w) * e;
    }
    const double rest = g.norm(w);
    if (rest < 1e-10 * input_norm) {
      throw DegeneracyError("gram_schmidt: inputs are (nearly) linearly dependent");
    }
    out.push_back(w / rest);
  }
  return out;
}

Endomorphism adjoint(const Endomorphism& p, const MetricMatrix& g) {
  if (p.rows() != g.dim() || p.cols() != g.dim()) throw UsageError("adjoint: dimension mismatch");
  return g.inverse() * p.transpose() * g.entries();
}

double op_distance(const Endomorphism& p, const Endomorphism& q, const MetricMatrix& g) {
  if (p.rows() != g.dim() || p.cols() != g.dim() || q.rows() != g.dim() || q.cols() != g.dim()) {
    throw UsageError("op_distance: dimension mismatch");
  }
  // tr(g^{-1} D^T g D) = ||L^T D L^{-T}||_F^2 with g = L L^T.
  const Eigen::MatrixXd& l = g.cholesky_factor();
  const Eigen::MatrixXd d = p - q;
  const Eigen::MatrixXd ltd = l.transpose() * d;
  // X = ltd * L^{-T}  <=>  X L^T = ltd  <=>  L X^T = ltd^T
  const Eigen::MatrixXd xt = l.triangularView<Eigen::Lower>().solve(ltd.transpose());
  return xt.norm();
}

double relative_residual(const RealVector& a, const RealVector& b, const MetricMatrix& g,
                         double floor) {
  return g.norm(a - b) / std::max(g.norm(b), floor);
}

double relative_residual(const RealVector& a, const RealVector& b, double floor) {
  if (a.size() != b.size()) throw UsageError("relative_residual: dimension mismatch");
  return (a - b).norm() / std::max(b.norm(), floor);
}

}  // namespace cq
