// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <span>
#include <vector>

#include "cqverify/linalg.hpp"

namespace cq {

/// Christoffel symbols Gamma^k_ij of a torsion-free connection in a chart.
class Christoffel {
 public:
  Christoffel() = default;
  explicit Christoffel(int dim) : dim_(dim), data_(static_cast<size_t>(dim) * dim * dim, 0.0) {}

  int dim() const { return dim_; }
  double& operator()(int k, int i, int j) { return data_[index(k, i, j)]; }
  double operator()(int k, int i, int j) const { return data_[index(k, i, j)]; }

  /// Gamma(X, Y)^k = Gamma^k_ij X^i Y^j.
  RealVector contract(const RealVector& x, const RealVector& y) const;
  double max_abs() const;

  friend Christoffel operator-(const Christoffel& a, const Christoffel& b);
  friend Christoffel operator+(const Christoffel& a, const Christoffel& b);
  friend Christoffel operator*(double s, const Christoffel& a);
  friend Christoffel operator/(const Christoffel& a, double s);

 private:
  size_t index(int k, int i, int j) const {
    return (static_cast<size_t>(k) * dim_ + i) * dim_ + j;
  }
  int dim_ = 0;
  std::vector<double> data_;
};

/// Levi-Civita symbols from g and its coordinate derivatives dg[m] = d_m g.
Christoffel christoffel_from_metric(const MetricMatrix& g, std::span<const Eigen::MatrixXd> dg);

/// Components R^l_{kij} with R(d_i, d_j) d_k = R^l_{kij} d_l, where
/// R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z.
class RiemannTensor {
 public:
  explicit RiemannTensor(int dim)
      : dim_(dim), data_(static_cast<size_t>(dim) * dim * dim * dim, 0.0) {}

  int dim() const { return dim_; }
  double& operator()(int l, int k, int i, int j) { return data_[index(l, k, i, j)]; }
  double operator()(int l, int k, int i, int j) const { return data_[index(l, k, i, j)]; }

  /// R(X,Y)Z.
  RealVector apply(const RealVector& x, const RealVector& y, const RealVector& z) const;

 private:
  size_t index(int l, int k, int i, int j) const {
    return ((static_cast<size_t>(l) * dim_ + k) * dim_ + i) * dim_ + j;
  }
  int dim_;
  std::vector<double> data_;
};

using ChristoffelField = std::function<Christoffel(const RealVector&)>;

/// Riemann tensor at x from a Christoffel field; derivatives of Gamma by
/// central differences with one Richardson level.
RiemannTensor riemann_from_christoffel(const ChristoffelField& gamma, const RealVector& x,
                                       double step);

}  // namespace cq
