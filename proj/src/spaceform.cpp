// SPDX-License-Identifier: Apache-2.0
#include "cqverify/spaceform.hpp"

#include <cmath>
#include <complex>
#include <sstream>

#include "cqverify/errors.hpp"
#include "cqverify/finite_difference.hpp"

namespace cq {
namespace {

using cplx = std::complex<double>;

// +1 for the Fubini-Study chart, -1 for the ball; 0 for flat.
double chart_sign(SpaceFormKind kind) {
  switch (kind) {
    case SpaceFormKind::projective: return 1.0;
    case SpaceFormKind::hyperbolic: return -1.0;
    case SpaceFormKind::euclidean: break;
  }
  return 0.0;
}

// Reference metrics have holomorphic sectional curvature +-4; rescaling by
// 1/(4|c|) moves it to 16c.
double metric_scale(const SpaceFormSpec& spec) {
  return spec.kind == SpaceFormKind::euclidean ? 1.0 : 1.0 / (4.0 * std::abs(spec.c));
}

cplx z_at(const RealVector& coords, int a) { return {coords(2 * a), coords(2 * a + 1)}; }

// Writes the real 2x2 block of the Hermitian entry h into G.
void put_block(Eigen::MatrixXd& g, int a, int b, cplx h) {
  g(2 * a, 2 * b) = h.real();
  g(2 * a, 2 * b + 1) = h.imag();
  g(2 * a + 1, 2 * b) = -h.imag();
  g(2 * a + 1, 2 * b + 1) = h.real();
}

void check_coords(const SpaceFormSpec& spec, const RealVector& coords) {
  require_same_dim(coords, spec.real_dim(), "chart point");
  if (!coords.allFinite()) throw DomainError("chart point has non-finite coordinates");
}

}  // namespace

void SpaceFormSpec::validate() const {
  if (n < 1) throw UsageError("space form complex dimension must be >= 1");
  if (!std::isfinite(c)) throw UsageError("space form curvature parameter must be finite");
  const bool ok = (kind == SpaceFormKind::euclidean && c == 0.0) ||
                  (kind == SpaceFormKind::projective && c > 0.0) ||
                  (kind == SpaceFormKind::hyperbolic && c < 0.0);
  if (!ok) throw UsageError("space form kind does not match the sign of c: " + to_string());
}

std::string SpaceFormSpec::to_string() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind) {
    case SpaceFormKind::euclidean: os << "eu(" << n << ")"; return os.str();
    case SpaceFormKind::projective: os << "cp("; break;
    case SpaceFormKind::hyperbolic: os << "ch("; break;
  }
  os << n << ",c=" << c << ")";
  return os.str();
}

Endomorphism standard_complex_structure(int n) {
  Endomorphism j = Endomorphism::Zero(2 * n, 2 * n);
  for (int a = 0; a < n; ++a) {
    j(2 * a + 1, 2 * a) = 1.0;
    j(2 * a, 2 * a + 1) = -1.0;
  }
  return j;
}

void require_in_chart(const SpaceFormSpec& spec, const ChartPoint& p, double margin) {
  check_coords(spec, p.coords);
  if (spec.kind == SpaceFormKind::hyperbolic && p.coords.norm() + margin >= 1.0) {
    throw DomainError("point outside the unit-ball chart (or within the finite-difference margin)");
  }
}

Eigen::MatrixXd metric_matrix_at(const SpaceFormSpec& spec, const RealVector& coords) {
  check_coords(spec, coords);
  const int n = spec.n;
  if (spec.kind == SpaceFormKind::euclidean) return Eigen::MatrixXd::Identity(2 * n, 2 * n);
  const double kappa = chart_sign(spec.kind);
  const double s = 1.0 + kappa * coords.squaredNorm();
  if (!(s > 0.0)) throw DomainError("point outside the unit-ball chart");
  Eigen::MatrixXd g(2 * n, 2 * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const cplx h = ((a == b ? s : 0.0) - kappa * std::conj(z_at(coords, a)) * z_at(coords, b)) / (s * s);
      put_block(g, a, b, h);
    }
  return metric_scale(spec) * g;
}

Eigen::MatrixXd metric_partial_at(const SpaceFormSpec& spec, const RealVector& coords, int m) {
  check_coords(spec, coords);
  const int n = spec.n;
  if (m < 0 || m >= 2 * n) throw UsageError("metric_partial_at: coordinate index out of range");
  if (spec.kind == SpaceFormKind::euclidean) return Eigen::MatrixXd::Zero(2 * n, 2 * n);
  const double kappa = chart_sign(spec.kind);
  const double s = 1.0 + kappa * coords.squaredNorm();
  if (!(s > 0.0)) throw DomainError("point outside the unit-ball chart");
  const double ds = 2.0 * kappa * coords(m);
  const int mc = m / 2;
  const bool along_y = (m % 2) == 1;
  // d(conj(z_a)) and d(z_b) along the real coordinate m
  const cplx dzbar = along_y ? cplx(0.0, -1.0) : cplx(1.0, 0.0);
  const cplx dz = along_y ? cplx(0.0, 1.0) : cplx(1.0, 0.0);
  Eigen::MatrixXd dg(2 * n, 2 * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const cplx za_bar = std::conj(z_at(coords, a));
      const cplx zb = z_at(coords, b);
      const cplx p = za_bar * zb;
      cplx dp = 0.0;
      if (a == mc) dp += dzbar * zb;
      if (b == mc) dp += za_bar * dz;
      const double delta = a == b ? 1.0 : 0.0;
      const cplx num = delta * s - kappa * p;
      const cplx dnum = delta * ds - kappa * dp;
      const cplx dh = dnum / (s * s) - 2.0 * num * ds / (s * s * s);
      put_block(dg, a, b, dh);
    }
  return metric_scale(spec) * dg;
}

Christoffel christoffel_at(const SpaceFormSpec& spec, const RealVector& coords) {
  const int d = spec.real_dim();
  if (spec.kind == SpaceFormKind::euclidean) {
    check_coords(spec, coords);
    return Christoffel(d);
  }
  std::vector<Eigen::MatrixXd> dg;
  dg.reserve(d);
  for (int m = 0; m < d; ++m) dg.push_back(metric_partial_at(spec, coords, m));
  return christoffel_from_metric(MetricMatrix(metric_matrix_at(spec, coords)), dg);
}

FactorStructure factor_structure_at(const SpaceFormSpec& spec, const ChartPoint& p) {
  spec.validate();
  require_in_chart(spec, p);
  return FactorStructure{MetricMatrix(metric_matrix_at(spec, p.coords)),
                         standard_complex_structure(spec.n), christoffel_at(spec, p.coords)};
}

RealVector curvature_formula(const SpaceFormSpec& spec, const ChartPoint& p, const RealVector& x,
                             const RealVector& y, const RealVector& z) {
  const int d = spec.real_dim();
  require_same_dim(x, d, "curvature_formula X");
  require_same_dim(y, d, "curvature_formula Y");
  require_same_dim(z, d, "curvature_formula Z");
  const FactorStructure fs = factor_structure_at(spec, p);
  const Endomorphism& j = fs.J;
  const RealVector jx = j * x;
  const RealVector jy = j * y;
  const RealVector r = wedge_apply(x, y, z, fs.g) + wedge_apply(jx, jy, z, fs.g) +
                       2.0 * fs.g.inner(x, jy) * (j * z);
  return 4.0 * spec.c * r;
}

RiemannTensor curvature_tensor_fd(const SpaceFormSpec& spec, const ChartPoint& p, double step) {
  spec.validate();
  require_valid_step(step);
  require_in_chart(spec, p, 2.0 * step);
  return riemann_from_christoffel(
      [&spec](const RealVector& c) { return christoffel_at(spec, c); }, p.coords, step);
}

RealVector curvature_fd(const SpaceFormSpec& spec, const ChartPoint& p, const RealVector& x,
                        const RealVector& y, const RealVector& z, double step) {
  const int d = spec.real_dim();
  require_same_dim(x, d, "curvature_fd X");
  require_same_dim(y, d, "curvature_fd Y");
  require_same_dim(z, d, "curvature_fd Z");
  return curvature_tensor_fd(spec, p, step).apply(x, y, z);
}

double kahler_residual(const SpaceFormSpec& spec, const ChartPoint& p, double step) {
  spec.validate();
  require_valid_step(step);
  require_in_chart(spec, p, 2.0 * step);
  const int d = spec.real_dim();
  // Connection from numerically differentiated metric, independent of the
  // closed-form derivatives used elsewhere.
  const auto metric = [&spec](const RealVector& c) -> Eigen::MatrixXd { return metric_matrix_at(spec, c); };
  std::vector<Eigen::MatrixXd> dg;
  dg.reserve(d);
  for (int m = 0; m < d; ++m) dg.push_back(richardson_partial(metric, p.coords, m, step));
  const MetricMatrix g(metric_matrix_at(spec, p.coords));
  const Christoffel gamma = christoffel_from_metric(g, dg);
  const Endomorphism j = standard_complex_structure(spec.n);

  double worst = 0.0;
  for (int i = 0; i < d; ++i) {
    const RealVector xi = RealVector::Unit(d, i);
    for (int k = 0; k < d; ++k) {
      const RealVector yk = RealVector::Unit(d, k);
      const RealVector res = gamma.contract(xi, j * yk) - j * gamma.contract(xi, yk);
      worst = std::max(worst, g.norm(res));
    }
  }
  return worst;
}

double hol_sec_curvature(const SpaceFormSpec& spec, const ChartPoint& p, const RealVector& x,
                         CurvatureSource source, double step) {
  require_same_dim(x, spec.real_dim(), "hol_sec_curvature X");
  const MetricMatrix g(metric_matrix_at(spec, p.coords));
  if (g.norm(x) < 1e-12) throw DegeneracyError("hol_sec_curvature: X is (nearly) zero");
  const RealVector jx = standard_complex_structure(spec.n) * x;
  const RealVector r = source == CurvatureSource::formula ? curvature_formula(spec, p, x, jx, jx)
                                                          : curvature_fd(spec, p, x, jx, jx, step);
  const double xx = g.inner(x, x);
  const double xjx = g.inner(x, jx);
  const double denom = xx * g.inner(jx, jx) - xjx * xjx;
  return g.inner(r, x) / denom;
}

ChartPoint random_chart_point(const SpaceFormSpec& spec, std::mt19937_64& rng) {
  const int d = spec.real_dim();
  ChartPoint p{RealVector(d)};
  if (spec.kind == SpaceFormKind::hyperbolic) {
    std::normal_distribution<double> normal;
    for (int i = 0; i < d; ++i) p.coords(i) = normal(rng);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double radius = 0.8 * std::pow(unit(rng), 1.0 / d);
    p.coords *= radius / p.coords.norm();
  } else {
    std::uniform_real_distribution<double> box(-2.0, 2.0);
    for (int i = 0; i < d; ++i) p.coords(i) = box(rng);
  }
  return p;
}

}  // namespace cq
