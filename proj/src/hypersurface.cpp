// SPDX-License-Identifier: Apache-2.0
#include "cqverify/hypersurface.hpp"

#include <cmath>

#include "cqverify/errors.hpp"

namespace cq {

bool ParameterBox::contains(const RealVector& u, double margin) const {
  if (u.size() != lo.size()) return false;
  for (int i = 0; i < u.size(); ++i) {
    if (!(u(i) - margin >= lo(i) && u(i) + margin <= hi(i))) return false;
  }
  return true;
}

Immersion::Immersion(std::string name, int ambient_dim, Map map, Jacobian jacobian, ParameterBox domain)
    : name_(std::move(name)),
      ambient_dim_(ambient_dim),
      map_(std::move(map)),
      jacobian_(std::move(jacobian)),
      domain_(std::move(domain)) {
  if (ambient_dim_ < 2 || domain_.dim() != ambient_dim_ - 1 || domain_.hi.size() != domain_.lo.size()) {
    throw UsageError("immersion '" + name_ + "': parameter box must have dimension ambient_dim - 1");
  }
  if (!map_) throw UsageError("immersion '" + name_ + "': missing map");
}

RealVector Immersion::coords(const RealVector& u) const {
  require_same_dim(u, param_dim(), "immersion parameter");
  RealVector x = map_(u);
  require_same_dim(x, ambient_dim_, "immersion image");
  return x;
}

Eigen::MatrixXd Immersion::jacobian(const RealVector& u) const {
  require_same_dim(u, param_dim(), "immersion parameter");
  if (jacobian_) return jacobian_(u);
  Eigen::MatrixXd jac(ambient_dim_, param_dim());
  for (int a = 0; a < param_dim(); ++a) {
    jac.col(a) = richardson_partial([this](const RealVector& v) { return coords(v); }, u, a, 1e-4);
  }
  return jac;
}

ProductPoint Immersion::point(const ProductSpec& spec, const RealVector& u) const {
  if (spec.real_dim() != ambient_dim_) {
    throw UsageError("immersion '" + name_ + "' needs an ambient of real dimension " +
                     std::to_string(ambient_dim_) + ", model has " + std::to_string(spec.real_dim()));
  }
  return ProductPoint::from_coords(spec, coords(u));
}

RealVector Immersion::sample_parameter(std::mt19937_64& rng, double margin) const {
  RealVector u(param_dim());
  for (int i = 0; i < param_dim(); ++i) {
    std::uniform_real_distribution<double> dist(domain_.lo(i) + margin, domain_.hi(i) - margin);
    u(i) = dist(rng);
  }
  return u;
}

RealVector HypersurfacePoint::from_parameter(const RealVector& w) const {
  return frame_coeffs.triangularView<Eigen::Upper>().solve(w);
}

namespace {

RealVector normal_from_tangents(const Eigen::MatrixXd& t, const MetricMatrix& g) {
  const int d = static_cast<int>(t.rows());
  const int m = static_cast<int>(t.cols());
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(t);
  const RealVector& sv = svd.singularValues();
  if (!(sv(m - 1) >= 1e-8 * sv(0))) throw DegeneracyError("immersion jacobian is rank deficient");
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(t);
  const Eigen::MatrixXd q = qr.householderQ();
  RealVector nu = g.solve(q.col(d - 1));
  nu /= g.norm(nu);
  Eigen::MatrixXd full(d, d);
  full << t, nu;
  if (full.determinant() < 0.0) nu = -nu;
  return nu;
}

struct LocalGeometry {
  RealVector x;
  Eigen::MatrixXd t;
  MetricMatrix g;
  Christoffel gamma;
  RealVector nu;
};

LocalGeometry local_geometry(const Immersion& imm, const ProductSpec& spec, const RealVector& u) {
  RealVector x = imm.coords(u);
  Eigen::MatrixXd t = imm.jacobian(u);
  MetricMatrix g(product_metric_at(spec, x));
  Christoffel gamma = product_christoffel_at(spec, x);
  RealVector nu = normal_from_tangents(t, g);
  return LocalGeometry{std::move(x), std::move(t), std::move(g), std::move(gamma), std::move(nu)};
}

// Columns A d_b = -(nabla-bar_b nu), projected tangentially.  Also reports
// the largest normal component removed.
Eigen::MatrixXd shape_columns(const Immersion& imm, const ProductSpec& spec, const RealVector& u,
                              const LocalGeometry& lg, double step, double* leak) {
  const auto normal = [&](const RealVector& v) { return unit_normal(imm, spec, v); };
  const int m = imm.param_dim();
  Eigen::MatrixXd out(lg.t.rows(), m);
  double worst = 0.0;
  for (int b = 0; b < m; ++b) {
    const RealVector dnu = richardson_partial(normal, u, b, step);
    RealVector v = -(dnu + lg.gamma.contract(lg.t.col(b), lg.nu));
    const double along = lg.g.inner(v, lg.nu);
    worst = std::max(worst, std::abs(along));
    out.col(b) = v - along * lg.nu;
  }
  if (leak) *leak = worst;
  return out;
}

void check_model(const Immersion& imm, const ProductSpec& spec) {
  spec.validate();
  if (spec.real_dim() != imm.ambient_dim()) {
    throw UsageError("immersion '" + imm.name() + "' needs an ambient of real dimension " +
                     std::to_string(imm.ambient_dim()) + ", model has " + std::to_string(spec.real_dim()));
  }
}

void check_parameter(const Immersion& imm, const ProductSpec& spec, const RealVector& u, double margin) {
  require_same_dim(u, imm.param_dim(), "immersion parameter");
  if (!imm.domain().contains(u, margin)) {
    throw DomainError("parameter outside the immersion domain (or within the finite-difference margin)");
  }
  require_in_chart(spec, imm.point(spec, u), margin);
}

HypersurfacePoint compute_point(const Immersion& imm, const ProductSpec& spec, const RealVector& u,
                                double step) {
  LocalGeometry lg = local_geometry(imm, spec, u);
  const int m = imm.param_dim();
  std::vector<RealVector> cols;
  cols.reserve(m);
  for (int a = 0; a < m; ++a) cols.push_back(lg.t.col(a));
  const std::vector<RealVector> e = gram_schmidt(cols, lg.g);
  Eigen::MatrixXd frame(lg.t.rows(), m);
  for (int a = 0; a < m; ++a) frame.col(a) = e[a];
  // frame = t * coeffs, coeffs upper triangular
  const Eigen::MatrixXd gram = lg.t.transpose() * lg.g.entries() * lg.t;
  Eigen::MatrixXd coeffs = gram.llt().solve(lg.t.transpose() * lg.g.entries() * frame);
  coeffs.triangularView<Eigen::StrictlyLower>().setZero();

  double leak = 0.0;
  const Eigen::MatrixXd s = shape_columns(imm, spec, u, lg, step, &leak);
  Endomorphism a = frame.transpose() * lg.g.entries() * s * coeffs;
  const double h = a.trace() / m;
  ProductPoint q = ProductPoint::from_coords(spec, lg.x);
  return HypersurfacePoint{u,     std::move(q), std::move(lg.g), std::move(lg.t), std::move(frame),
                           std::move(coeffs), std::move(lg.nu), std::move(a), h, leak};
}

}  // namespace

RealVector unit_normal(const Immersion& imm, const ProductSpec& spec, const RealVector& u) {
  const RealVector x = imm.coords(u);
  return normal_from_tangents(imm.jacobian(u), MetricMatrix(product_metric_at(spec, x)));
}

HypersurfacePoint point_data(const Immersion& imm, const ProductSpec& spec, const RealVector& u,
                             double step) {
  check_model(imm, spec);
  require_valid_step(step);
  check_parameter(imm, spec, u, 2.0 * step);
  return compute_point(imm, spec, u, step);
}

Endomorphism shape_operator_second_form(const Immersion& imm, const ProductSpec& spec,
                                        const HypersurfacePoint& pt, double step) {
  check_model(imm, spec);
  require_valid_step(step);
  check_parameter(imm, spec, pt.u, 2.0 * step);
  const int m = imm.param_dim();
  const RealVector x = imm.coords(pt.u);
  const Christoffel gamma = product_christoffel_at(spec, x);
  const Eigen::MatrixXd& t = pt.tangent_basis;
  const auto jac = [&imm](const RealVector& v) -> Eigen::MatrixXd { return imm.jacobian(v); };
  Eigen::MatrixXd second(m, m);
  for (int a = 0; a < m; ++a) {
    const Eigen::MatrixXd dt = richardson_partial(jac, pt.u, a, step);
    for (int b = 0; b < m; ++b) {
      second(a, b) = pt.g.inner(dt.col(b) + gamma.contract(t.col(a), t.col(b)), pt.nu);
    }
  }
  const Eigen::MatrixXd gram = t.transpose() * pt.g.entries() * t;
  const Eigen::MatrixXd a_coord = gram.llt().solve(second);
  return pt.frame_coeffs.triangularView<Eigen::Upper>().solve(a_coord * pt.frame_coeffs);
}

StructuralData structural_data_from_frame(const MetricMatrix& g, const Endomorphism& J,
                                          const Endomorphism& F, const Eigen::MatrixXd& frame,
                                          const RealVector& nu) {
  const Eigen::MatrixXd et_g = frame.transpose() * g.entries();
  StructuralData sd;
  sd.phi = et_g * J * frame;
  sd.f = et_g * F * frame;
  sd.W = et_g * (-(J * nu));
  const RealVector fnu = F * nu;
  sd.V = et_g * fnu;
  sd.h = g.inner(fnu, nu);
  const int m = static_cast<int>(frame.cols());
  const Endomorphism id = Endomorphism::Identity(m, m);
  sd.L = {id + kEps[0] * sd.f, id + kEps[1] * sd.f};
  return sd;
}

StructuralData induced_structures(const HypersurfacePoint& pt, const AmbientStructure& amb) {
  return structural_data_from_frame(amb.g, amb.J, amb.F, pt.frame, pt.nu);
}

AdaptedFrame adapted_frame(const StructuralData& sd, std::uint64_t seed) {
  const int m = sd.dim();
  if (m < 1 || (m - 1) % 2 != 0) throw UsageError("adapted_frame: W-orthogonal complement must be even-dimensional");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  AdaptedFrame fr;
  fr.W = sd.W;
  std::vector<RealVector> basis{sd.W};
  for (int j = 0; j < (m - 1) / 2; ++j) {
    RealVector v(m);
    double nrm = 0.0;
    for (int attempt = 0; attempt < 8 && nrm < 1e-6; ++attempt) {
      for (int i = 0; i < m; ++i) v(i) = normal(rng);
      for (int pass = 0; pass < 2; ++pass)
        for (const RealVector& b : basis) v -= b.dot(v) * b;
      nrm = v.norm();
    }
    if (nrm < 1e-6) throw DegeneracyError("adapted_frame: could not find a vector orthogonal to the frame");
    RealVector e = v / nrm;
    RealVector pe = sd.phi * e;
    basis.push_back(e);
    basis.push_back(pe);
    fr.e.push_back(std::move(e));
    fr.phi_e.push_back(std::move(pe));
  }
  Eigen::MatrixXd all(m, m);
  for (int i = 0; i < m; ++i) all.col(i) = basis[i];
  const double res = (all.transpose() * all - Eigen::MatrixXd::Identity(m, m)).cwiseAbs().maxCoeff();
  if (res > 1e-8) throw DegeneracyError("adapted_frame: frame is not orthonormal (residual " + std::to_string(res) + ")");
  return fr;
}

RealVector NumericCodazzi::operator()(const RealVector& y, const RealVector& x) const {
  const int m = pt_.dim();
  require_same_dim(y, m, "Codazzi argument");
  require_same_dim(x, m, "Codazzi argument");
  const RealVector yc = pt_.to_parameter(y);
  const RealVector xc = pt_.to_parameter(x);
  RealVector out = RealVector::Zero(pt_.frame.rows());
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) out += xc(a) * yc(b) * d_[a][b];
  return pt_.to_frame(out);
}

NumericCodazzi codazzi_numeric(const Immersion& imm, const ProductSpec& spec, const RealVector& u,
                               double step) {
  HypersurfacePoint pt = point_data(imm, spec, u, step);
  const int m = imm.param_dim();
  const auto field = [&](const RealVector& v) -> Eigen::MatrixXd {
    const LocalGeometry lg = local_geometry(imm, spec, v);
    return shape_columns(imm, spec, v, lg, step, nullptr);
  };
  const LocalGeometry lg = local_geometry(imm, spec, u);
  const Eigen::MatrixXd s = field(u);
  // cov[a].col(b) = nabla_a (A d_b)
  std::vector<Eigen::MatrixXd> cov(m);
  for (int a = 0; a < m; ++a) {
    const Eigen::MatrixXd ds = richardson_partial(field, u, a, step);
    cov[a].resize(s.rows(), m);
    for (int b = 0; b < m; ++b) {
      RealVector v = ds.col(b) + lg.gamma.contract(lg.t.col(a), s.col(b));
      cov[a].col(b) = v - lg.g.inner(v, lg.nu) * lg.nu;
    }
  }
  std::vector<std::vector<RealVector>> d(m, std::vector<RealVector>(m));
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) d[a][b] = cov[a].col(b) - cov[b].col(a);
  return NumericCodazzi(std::move(pt), std::move(d));
}

RealVector d_nabla_A_numeric(const Immersion& imm, const ProductSpec& spec, const RealVector& u,
                             const RealVector& y, const RealVector& x, double step) {
  return codazzi_numeric(imm, spec, u, step)(y, x);
}

RealVector IntrinsicCurvature::operator()(const RealVector& x, const RealVector& y,
                                          const RealVector& z) const {
  const RealVector w = r_.apply(pt_.to_parameter(x), pt_.to_parameter(y), pt_.to_parameter(z));
  return pt_.from_parameter(w);
}

IntrinsicCurvature intrinsic_curvature_numeric(const Immersion& imm, const ProductSpec& spec,
                                               const RealVector& u, double step) {
  HypersurfacePoint pt = point_data(imm, spec, u, step);
  const int m = imm.param_dim();
  const auto jac = [&imm](const RealVector& v) -> Eigen::MatrixXd { return imm.jacobian(v); };
  const auto induced = [&](const RealVector& v) -> Christoffel {
    const RealVector x = imm.coords(v);
    const Eigen::MatrixXd t = imm.jacobian(v);
    const MetricMatrix g(product_metric_at(spec, x));
    const Christoffel gbar = product_christoffel_at(spec, x);
    const Eigen::MatrixXd gram = t.transpose() * g.entries() * t;
    const Eigen::LLT<Eigen::MatrixXd> llt(gram);
    Christoffel out(m);
    for (int a = 0; a < m; ++a) {
      const Eigen::MatrixXd dt = richardson_partial(jac, v, a, step);
      for (int b = 0; b < m; ++b) {
        const RealVector acc = dt.col(b) + gbar.contract(t.col(a), t.col(b));
        const RealVector coeff = llt.solve(t.transpose() * (g.entries() * acc));
        for (int c = 0; c < m; ++c) out(c, a, b) = coeff(c);
      }
    }
    return out;
  };
  RiemannTensor r = riemann_from_christoffel(induced, u, step);
  return IntrinsicCurvature(std::move(pt), std::move(r));
}

RealVector mean_curvature_gradient_numeric(const Immersion& imm, const ProductSpec& spec,
                                           const RealVector& u, double step) {
  check_model(imm, spec);
  require_valid_step(step);
  check_parameter(imm, spec, u, 3.0 * step);
  const HypersurfacePoint pt = compute_point(imm, spec, u, step);
  const auto mean_curvature = [&](const RealVector& v) { return compute_point(imm, spec, v, step).H; };
  const int m = imm.param_dim();
  RealVector dh(m);
  for (int a = 0; a < m; ++a) dh(a) = richardson_partial(mean_curvature, u, a, step);
  const Eigen::MatrixXd gram = pt.tangent_basis.transpose() * pt.g.entries() * pt.tangent_basis;
  return pt.from_parameter(gram.llt().solve(dh));
}

double umbilicity_deviation(const HypersurfacePoint& pt) {
  const int m = pt.dim();
  return op_distance(pt.A, pt.H * Endomorphism::Identity(m, m), MetricMatrix::identity(m));
}

FInvarianceReport classify_F_invariance(const Immersion& imm, const ProductSpec& spec,
                                        const std::vector<RealVector>& samples, double tol,
                                        double step) {
  if (samples.empty()) throw UsageError("classify_F_invariance: need at least one sample");
  FInvarianceReport rep;
  for (const RealVector& u : samples) {
    try {
      const HypersurfacePoint pt = point_data(imm, spec, u, step);
      const StructuralData sd = induced_structures(pt, ambient_structure_at(spec, pt.q));
      const int m = sd.dim();
      rep.max_V = std::max(rep.max_V, sd.V.norm());
      rep.max_f2_deviation =
          std::max(rep.max_f2_deviation, (sd.f * sd.f - Endomorphism::Identity(m, m)).norm());
      ++rep.samples;
    } catch (const DomainError&) {
      ++rep.skipped;
    } catch (const DegeneracyError&) {
      ++rep.skipped;
    }
  }
  rep.invariant = rep.samples > 0 && rep.max_V <= tol;
  rep.f2_criterion = rep.samples > 0 && rep.max_f2_deviation <= tol;
  rep.criteria_agree = rep.invariant == rep.f2_criterion;
  return rep;
}

}  // namespace cq
