// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <random>
#include <string>

#include "cqverify/connection.hpp"
#include "cqverify/linalg.hpp"

namespace cq {

enum class SpaceFormKind { euclidean, projective, hyperbolic };

/// A complex space form of complex dimension n and holomorphic sectional
/// curvature 16c.  The kind is determined by the sign of c.
struct SpaceFormSpec {
  SpaceFormKind kind = SpaceFormKind::euclidean;
  int n = 1;
  double c = 0.0;

  /// Throws UsageError unless n >= 1 and kind agrees with sign(c).
  void validate() const;
  int real_dim() const { return 2 * n; }
  std::string to_string() const;

  static SpaceFormSpec euclidean(int n) { return {SpaceFormKind::euclidean, n, 0.0}; }
  static SpaceFormSpec projective(int n, double c) { return {SpaceFormKind::projective, n, c}; }
  static SpaceFormSpec hyperbolic(int n, double c) { return {SpaceFormKind::hyperbolic, n, c}; }
};

/// Real chart coordinates (x_1, y_1, ..., x_n, y_n) of z_a = x_a + i y_a.
/// Projective: one inhomogeneous chart.  Hyperbolic: the unit ball.
struct ChartPoint {
  RealVector coords;
};

struct FactorStructure {
  MetricMatrix g;
  Endomorphism J;
  Christoffel gamma;
};

/// Multiplication by i in real coordinates: J d/dx_a = d/dy_a, J d/dy_a = -d/dx_a.
Endomorphism standard_complex_structure(int n);

/// Throws DomainError if the point is not in the chart (or within `margin`
/// of the hyperbolic ball boundary).
void require_in_chart(const SpaceFormSpec& spec, const ChartPoint& p, double margin = 0.0);

Eigen::MatrixXd metric_matrix_at(const SpaceFormSpec& spec, const RealVector& coords);
/// Closed-form d g / d coords(m).
Eigen::MatrixXd metric_partial_at(const SpaceFormSpec& spec, const RealVector& coords, int m);
Christoffel christoffel_at(const SpaceFormSpec& spec, const RealVector& coords);

FactorStructure factor_structure_at(const SpaceFormSpec& spec, const ChartPoint& p);

/// R(X,Y)Z = 4c (X^Y + JX^JY + 2 <X,JY> J) Z.
RealVector curvature_formula(const SpaceFormSpec& spec, const ChartPoint& p, const RealVector& x,
                             const RealVector& y, const RealVector& z);

/// Riemann tensor from the chart Christoffel symbols, differentiated numerically.
RiemannTensor curvature_tensor_fd(const SpaceFormSpec& spec, const ChartPoint& p, double step);
RealVector curvature_fd(const SpaceFormSpec& spec, const ChartPoint& p, const RealVector& x,
                        const RealVector& y, const RealVector& z, double step);

/// max over coordinate directions X and basis vectors Y of |nabla_X(JY) - J nabla_X Y|_g.
double kahler_residual(const SpaceFormSpec& spec, const ChartPoint& p, double step);

enum class CurvatureSource { formula, finite_difference };

/// K(X,JX) = <R(X,JX)JX, X> / (|X|^2 |JX|^2 - <X,JX>^2).
///
/// The numerator is taken in this order because, with R(X,Y)Z as defined in
/// curvature_formula, <R(X,JX)X, JX> evaluates to -16c.
double hol_sec_curvature(const SpaceFormSpec& spec, const ChartPoint& p, const RealVector& x,
                         CurvatureSource source = CurvatureSource::formula,
                         double step = 1e-4);

/// Sampling region used by the suites: box |coords|_inf <= 2 (euclidean,
/// projective) or ball |coords| <= 0.8 (hyperbolic).
ChartPoint random_chart_point(const SpaceFormSpec& spec, std::mt19937_64& rng);

}  // namespace cq
