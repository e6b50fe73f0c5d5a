// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <random>
#include <string>

#include "cqverify/spaceform.hpp"

namespace cq {

/// Sign pair (eps_1, eps_2) of the operators Lbar_i = I + eps_i F.
inline constexpr std::array<double, 2> kEps{1.0, -1.0};

/// The Riemannian product CQ_1 x CQ_2.  Real coordinates of factor 1 come
/// first, then those of factor 2.
struct ProductSpec {
  SpaceFormSpec factor1;
  SpaceFormSpec factor2;

  void validate() const;
  int n() const { return factor1.n + factor2.n; }
  int real_dim() const { return 2 * n(); }
  const SpaceFormSpec& factor(int i) const { return i == 0 ? factor1 : factor2; }
  double c(int i) const { return factor(i).c; }
  std::string to_string() const;
};

struct ProductPoint {
  ChartPoint p1;
  ChartPoint p2;

  RealVector coords() const;
  static ProductPoint from_coords(const ProductSpec& spec, const RealVector& coords);
};

/// Ambient tensors at one point.  Lbar[i] = I + eps_i F, so Lbar[i] / 2 is the
/// projection onto factor i.
struct AmbientStructure {
  MetricMatrix g;
  Endomorphism J;
  Endomorphism F;
  std::array<Endomorphism, 2> Lbar;
  Christoffel gamma;
};

void require_in_chart(const ProductSpec& spec, const ProductPoint& q, double margin = 0.0);

Eigen::MatrixXd product_metric_at(const ProductSpec& spec, const RealVector& coords);
Christoffel product_christoffel_at(const ProductSpec& spec, const RealVector& coords);
/// F = pi_1 - pi_2 in the block layout.
Endomorphism product_structure_F(const ProductSpec& spec);

AmbientStructure ambient_structure_at(const ProductSpec& spec, const ProductPoint& q);

/// sum_i (c_i/2) [Lbar_i X ^ Lbar_i Y + J Lbar_i X ^ J Lbar_i Y
///                + 2 <Lbar_i X, J Lbar_i Y> J] Lbar_i Z
RealVector curvature_product_formula(const ProductSpec& spec, const AmbientStructure& amb,
                                     const RealVector& x, const RealVector& y, const RealVector& z);
/// Same expression with explicit constants, for structures not tied to a chart.
RealVector curvature_product_formula(const std::array<double, 2>& c, const AmbientStructure& amb,
                                     const RealVector& x, const RealVector& y, const RealVector& z);
RealVector curvature_product_formula(const ProductSpec& spec, const ProductPoint& q,
                                     const RealVector& x, const RealVector& y, const RealVector& z);

/// R_1(X_1, Y_1) Z_1 + R_2(X_2, Y_2) Z_2 with each factor's own curvature_formula.
RealVector curvature_block_sum(const ProductSpec& spec, const ProductPoint& q, const RealVector& x,
                               const RealVector& y, const RealVector& z);

RiemannTensor product_curvature_tensor_fd(const ProductSpec& spec, const ProductPoint& q, double step);

ProductPoint random_product_point(const ProductSpec& spec, std::mt19937_64& rng);

}  // namespace cq
