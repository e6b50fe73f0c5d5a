// SPDX-License-Identifier: Apache-2.0
#include "cqverify/connection.hpp"

#include <algorithm>
#include <cmath>

#include "cqverify/errors.hpp"
#include "cqverify/finite_difference.hpp"

namespace cq {

RealVector Christoffel::contract(const RealVector& x, const RealVector& y) const {
  require_same_dim(x, dim_, "Christoffel contraction");
  require_same_dim(y, dim_, "Christoffel contraction");
  RealVector out = RealVector::Zero(dim_);
  for (int k = 0; k < dim_; ++k) {
    double acc = 0.0;
    for (int i = 0; i < dim_; ++i) {
      if (x(i) == 0.0) continue;
      for (int j = 0; j < dim_; ++j) acc += (*this)(k, i, j) * x(i) * y(j);
    }
    out(k) = acc;
  }
  return out;
}

double Christoffel::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

Christoffel operator-(const Christoffel& a, const Christoffel& b) {
  Christoffel out(a.dim_);
  for (size_t i = 0; i < a.data_.size(); ++i) out.data_[i] = a.data_[i] - b.data_[i];
  return out;
}

Christoffel operator+(const Christoffel& a, const Christoffel& b) {
  Christoffel out(a.dim_);
  for (size_t i = 0; i < a.data_.size(); ++i) out.data_[i] = a.data_[i] + b.data_[i];
  return out;
}

Christoffel operator*(double s, const Christoffel& a) {
  Christoffel out(a.dim_);
  for (size_t i = 0; i < a.data_.size(); ++i) out.data_[i] = s * a.data_[i];
  return out;
}

Christoffel operator/(const Christoffel& a, double s) { return (1.0 / s) * a; }

Christoffel christoffel_from_metric(const MetricMatrix& g, std::span<const Eigen::MatrixXd> dg) {
  const int n = g.dim();
  if (static_cast<int>(dg.size()) != n) throw UsageError("christoffel_from_metric: need one dg per coordinate");
  const Eigen::MatrixXd ginv = g.inverse();
  // first kind: Gamma_{l,ij} = (d_i g_lj + d_j g_li - d_l g_ij) / 2
  Christoffel first(n);
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        first(l, i, j) = 0.5 * (dg[i](l, j) + dg[j](l, i) - dg[l](i, j));
  Christoffel out(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double acc = 0.0;
        for (int l = 0; l < n; ++l) acc += ginv(k, l) * first(l, i, j);
        out(k, i, j) = acc;
      }
  return out;
}

RealVector RiemannTensor::apply(const RealVector& x, const RealVector& y, const RealVector& z) const {
  require_same_dim(x, dim_, "Riemann argument");
  require_same_dim(y, dim_, "Riemann argument");
  require_same_dim(z, dim_, "Riemann argument");
  RealVector out = RealVector::Zero(dim_);
  for (int l = 0; l < dim_; ++l) {
    double acc = 0.0;
    for (int k = 0; k < dim_; ++k)
      for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) acc += (*this)(l, k, i, j) * z(k) * x(i) * y(j);
    out(l) = acc;
  }
  return out;
}

RiemannTensor riemann_from_christoffel(const ChristoffelField& gamma, const RealVector& x,
                                       double step) {
  require_valid_step(step);
  const Christoffel g0 = gamma(x);
  const int n = g0.dim();
  require_same_dim(x, n, "riemann_from_christoffel point");
  std::vector<Christoffel> dgamma;
  dgamma.reserve(n);
  for (int m = 0; m < n; ++m) dgamma.push_back(richardson_partial(gamma, x, m, step));

  RiemannTensor r(n);
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double v = dgamma[i](l, j, k) - dgamma[j](l, i, k);
          for (int m = 0; m < n; ++m) v += g0(l, i, m) * g0(m, j, k) - g0(l, j, m) * g0(m, i, k);
          r(l, k, i, j) = v;
        }
  return r;
}

}  // namespace cq
