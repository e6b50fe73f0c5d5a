// SPDX-License-Identifier: Apache-2.0
#include "cqverify/product.hpp"

#include "cqverify/errors.hpp"
#include "cqverify/finite_difference.hpp"

namespace cq {

void ProductSpec::validate() const {
  factor1.validate();
  factor2.validate();
}

std::string ProductSpec::to_string() const { return factor1.to_string() + "x" + factor2.to_string(); }

RealVector ProductPoint::coords() const {
  RealVector out(p1.coords.size() + p2.coords.size());
  out << p1.coords, p2.coords;
  return out;
}

ProductPoint ProductPoint::from_coords(const ProductSpec& spec, const RealVector& coords) {
  require_same_dim(coords, spec.real_dim(), "product point");
  const int d1 = spec.factor1.real_dim();
  return ProductPoint{ChartPoint{coords.head(d1)}, ChartPoint{coords.tail(spec.factor2.real_dim())}};
}

void require_in_chart(const ProductSpec& spec, const ProductPoint& q, double margin) {
  require_in_chart(spec.factor1, q.p1, margin);
  require_in_chart(spec.factor2, q.p2, margin);
}

Eigen::MatrixXd product_metric_at(const ProductSpec& spec, const RealVector& coords) {
  require_same_dim(coords, spec.real_dim(), "product point");
  const int d1 = spec.factor1.real_dim();
  const int d2 = spec.factor2.real_dim();
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(d1 + d2, d1 + d2);
  g.topLeftCorner(d1, d1) = metric_matrix_at(spec.factor1, coords.head(d1));
  g.bottomRightCorner(d2, d2) = metric_matrix_at(spec.factor2, coords.tail(d2));
  return g;
}

Christoffel product_christoffel_at(const ProductSpec& spec, const RealVector& coords) {
  require_same_dim(coords, spec.real_dim(), "product point");
  const int d1 = spec.factor1.real_dim();
  const int d2 = spec.factor2.real_dim();
  const Christoffel g1 = christoffel_at(spec.factor1, coords.head(d1));
  const Christoffel g2 = christoffel_at(spec.factor2, coords.tail(d2));
  Christoffel out(d1 + d2);
  for (int k = 0; k < d1; ++k)
    for (int i = 0; i < d1; ++i)
      for (int j = 0; j < d1; ++j) out(k, i, j) = g1(k, i, j);
  for (int k = 0; k < d2; ++k)
    for (int i = 0; i < d2; ++i)
      for (int j = 0; j < d2; ++j) out(d1 + k, d1 + i, d1 + j) = g2(k, i, j);
  return out;
}

Endomorphism product_structure_F(const ProductSpec& spec) {
  const int d1 = spec.factor1.real_dim();
  const int d2 = spec.factor2.real_dim();
  RealVector diag(d1 + d2);
  diag << RealVector::Ones(d1), -RealVector::Ones(d2);
  return diag.asDiagonal();
}

AmbientStructure ambient_structure_at(const ProductSpec& spec, const ProductPoint& q) {
  spec.validate();
  require_in_chart(spec, q);
  const RealVector coords = q.coords();
  const int d = spec.real_dim();
  const Endomorphism f = product_structure_F(spec);
  const Endomorphism id = Endomorphism::Identity(d, d);
  return AmbientStructure{MetricMatrix(product_metric_at(spec, coords)),
                          standard_complex_structure(spec.n()),
                          f,
                          {id + kEps[0] * f, id + kEps[1] * f},
                          product_christoffel_at(spec, coords)};
}

RealVector curvature_product_formula(const std::array<double, 2>& c, const AmbientStructure& amb,
                                     const RealVector& x, const RealVector& y, const RealVector& z) {
  const int d = amb.g.dim();
  require_same_dim(x, d, "product curvature X");
  require_same_dim(y, d, "product curvature Y");
  require_same_dim(z, d, "product curvature Z");
  RealVector out = RealVector::Zero(d);
  for (int i = 0; i < 2; ++i) {
    if (c[i] == 0.0) continue;
    const Endomorphism& l = amb.Lbar[i];
    const RealVector lx = l * x;
    const RealVector ly = l * y;
    const RealVector lz = l * z;
    const RealVector jlx = amb.J * lx;
    const RealVector jly = amb.J * ly;
    out += 0.5 * c[i] *
           (wedge_apply(lx, ly, lz, amb.g) + wedge_apply(jlx, jly, lz, amb.g) +
            2.0 * amb.g.inner(lx, jly) * (amb.J * lz));
  }
  return out;
}

RealVector curvature_product_formula(const ProductSpec& spec, const AmbientStructure& amb,
                                     const RealVector& x, const RealVector& y, const RealVector& z) {
  require_same_dim(x, spec.real_dim(), "product curvature X");
  return curvature_product_formula(std::array<double, 2>{spec.c(0), spec.c(1)}, amb, x, y, z);
}

RealVector curvature_product_formula(const ProductSpec& spec, const ProductPoint& q,
                                     const RealVector& x, const RealVector& y, const RealVector& z) {
  return curvature_product_formula(spec, ambient_structure_at(spec, q), x, y, z);
}

RealVector curvature_block_sum(const ProductSpec& spec, const ProductPoint& q, const RealVector& x,
                               const RealVector& y, const RealVector& z) {
  const int d = spec.real_dim();
  require_same_dim(x, d, "block sum X");
  require_same_dim(y, d, "block sum Y");
  require_same_dim(z, d, "block sum Z");
  spec.validate();
  require_in_chart(spec, q);
  const int d1 = spec.factor1.real_dim();
  const int d2 = spec.factor2.real_dim();
  RealVector out(d);
  out.head(d1) = curvature_formula(spec.factor1, q.p1, x.head(d1), y.head(d1), z.head(d1));
  out.tail(d2) = curvature_formula(spec.factor2, q.p2, x.tail(d2), y.tail(d2), z.tail(d2));
  return out;
}

RiemannTensor product_curvature_tensor_fd(const ProductSpec& spec, const ProductPoint& q, double step) {
  spec.validate();
  require_valid_step(step);
  require_in_chart(spec, q, 2.0 * step);
  return riemann_from_christoffel(
      [&spec](const RealVector& c) { return product_christoffel_at(spec, c); }, q.coords(), step);
}

ProductPoint random_product_point(const ProductSpec& spec, std::mt19937_64& rng) {
  ChartPoint p1 = random_chart_point(spec.factor1, rng);
  ChartPoint p2 = random_chart_point(spec.factor2, rng);
  return ProductPoint{std::move(p1), std::move(p2)};
}

}  // namespace cq
