// SPDX-License-Identifier: Apache-2.0
#include "cqverify/identities.hpp"

#include <cmath>
#include <random>

#include "cqverify/errors.hpp"

namespace cq {
namespace {

// Euclidean wedge on frame components.
RealVector wedge(const RealVector& x, const RealVector& y, const RealVector& z) {
  return y.dot(z) * x - x.dot(z) * y;
}

void require_tangent(const StructuralSample& ss, const RealVector& v, const char* what) {
  require_same_dim(v, ss.dim(), what);
}

AmbientStructure linear_ambient(int n1, int n2) {
  const int d = 2 * (n1 + n2);
  RealVector diag(d);
  diag << RealVector::Ones(2 * n1), -RealVector::Ones(2 * n2);
  const Endomorphism f = diag.asDiagonal();
  const Endomorphism id = Endomorphism::Identity(d, d);
  return AmbientStructure{MetricMatrix::identity(d), standard_complex_structure(n1 + n2), f,
                          {id + kEps[0] * f, id + kEps[1] * f}, Christoffel(d)};
}

}  // namespace

StructuralSample sample_from_normal(int n1, int n2, const std::array<double, 2>& c, const RealVector& nu,
                                    std::uint64_t seed) {
  if (n1 < 1 || n2 < 1) throw UsageError("structural sample: n1, n2 must be >= 1");
  const int d = 2 * (n1 + n2);
  require_same_dim(nu, d, "structural sample normal");
  const double len = nu.norm();
  if (!(len > 0.0)) throw DegeneracyError("structural sample: zero normal");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd m(d, d);
  m.col(0) = nu / len;
  for (int j = 1; j < d; ++j)
    for (int i = 0; i < d; ++i) m(i, j) = normal(rng);
  const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(m).householderQ();

  StructuralSample ss{linear_ambient(n1, n2), q.rightCols(d - 1), nu / len, {}, c, n1, n2};
  ss.sd = structural_data_from_frame(ss.amb.g, ss.amb.J, ss.amb.F, ss.frame, ss.nu);
  return ss;
}

StructuralSample synth_structural(std::uint64_t seed, int n1, int n2, const std::array<double, 2>& c) {
  if (n1 < 1 || n2 < 1) throw UsageError("synth_structural: n1, n2 must be >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  RealVector nu(2 * (n1 + n2));
  for (int i = 0; i < nu.size(); ++i) nu(i) = normal(rng);
  return sample_from_normal(n1, n2, c, nu, rng());
}

StructuralSample sample_at_point(const ProductSpec& spec, const HypersurfacePoint& pt) {
  AmbientStructure amb = ambient_structure_at(spec, pt.q);
  StructuralData sd = induced_structures(pt, amb);
  return StructuralSample{std::move(amb), pt.frame, pt.nu, std::move(sd), {spec.c(0), spec.c(1)},
                          spec.factor1.n, spec.factor2.n};
}

RealVector codazzi_rhs_closed_form(const StructuralSample& ss, const RealVector& y, const RealVector& x) {
  require_tangent(ss, y, "Codazzi Y");
  require_tangent(ss, x, "Codazzi X");
  const StructuralData& sd = ss.sd;
  RealVector out = RealVector::Zero(ss.dim());
  const RealVector yxv = wedge(y, x, sd.V);
  for (int i = 0; i < 2; ++i) {
    const double e = kEps[i];
    const Endomorphism& l = sd.L[i];
    const RealVector lw = l * sd.W;
    const Endomorphism lpl = l * sd.phi * l;
    out += 0.5 * ss.c[i] *
           (2.0 * e * (l * yxv) + lpl * wedge(y, x, lw) +
            (3.0 * e * yxv.dot(lw) + 2.0 * x.dot(lpl * y)) * lw);
  }
  return out;
}

RealVector codazzi_rhs_from_curvature(const StructuralSample& ss, const RealVector& y, const RealVector& x) {
  require_tangent(ss, y, "Codazzi Y");
  require_tangent(ss, x, "Codazzi X");
  return -ss.to_frame(curvature_product_formula(ss.c, ss.amb, ss.to_ambient(x), ss.to_ambient(y), ss.nu));
}

RealVector codazzi_rhs_with_w(const StructuralSample& ss, const RealVector& x) {
  require_tangent(ss, x, "Codazzi X");
  const StructuralData& sd = ss.sd;
  RealVector out = RealVector::Zero(ss.dim());
  for (int i = 0; i < 2; ++i) {
    const double e = kEps[i];
    const Endomorphism& l = sd.L[i];
    const RealVector lw = l * sd.W;
    out += 0.5 * ss.c[i] *
           ((7.0 * e + sd.h) * x.dot(sd.V) * lw + x.dot(lw) * (e - sd.h) * sd.V -
            (1.0 + e * sd.h) * (l * sd.phi * l * x));
  }
  return out;
}

RealVector codazzi_w_v(const StructuralSample& ss) {
  const StructuralData& sd = ss.sd;
  RealVector out = RealVector::Zero(ss.dim());
  const RealVector phiv = sd.phi * sd.V;
  for (int i = 0; i < 2; ++i) {
    out += 4.0 * ss.c[i] * (1.0 - sd.h * sd.h) * ((kEps[i] + sd.h) * sd.W - phiv);
  }
  return out;
}

const char* to_string(FrameDisplay d) {
  switch (d) {
    case FrameDisplay::w_e: return "W,e";
    case FrameDisplay::w_phi_e: return "W,phi_e";
    case FrameDisplay::e_phi_e: return "e,phi_e";
  }
  return "?";
}

std::array<RealVector, 2> frame_display_arguments(const AdaptedFrame& fr, FrameDisplay d, int j, int l) {
  const int m = static_cast<int>(fr.e.size());
  if (j < 0 || j >= m || l < 0 || l >= m) throw UsageError("frame index out of range");
  switch (d) {
    case FrameDisplay::w_e: return {fr.W, fr.e[j]};
    case FrameDisplay::w_phi_e: return {fr.W, fr.phi_e[j]};
    case FrameDisplay::e_phi_e: return {fr.e[j], fr.phi_e[l]};
  }
  throw UsageError("unknown frame display");
}

RealVector frame_codazzi_rhs(const StructuralSample& ss, const AdaptedFrame& fr, FrameDisplay d, int j, int l,
                             Transcription t) {
  const int m = static_cast<int>(fr.e.size());
  if (j < 0 || j >= m || l < 0 || l >= m) throw UsageError("frame index out of range");
  const StructuralData& sd = ss.sd;
  const RealVector& v = sd.V;
  const double h = sd.h;
  const RealVector phiv = sd.phi * v;
  RealVector out = RealVector::Zero(ss.dim());

  for (int i = 0; i < 2; ++i) {
    const double e = kEps[i];
    const double c = ss.c[i];
    const Endomorphism& li = sd.L[i];
    const Endomorphism lpl = li * sd.phi * li;

    if (d == FrameDisplay::w_e) {
      const RealVector& ej = fr.e[j];
      const RealVector pej = sd.phi * ej;
      out += 4.0 * c * (e + h) * ej.dot(v) * fr.W;
      for (int k = 0; k < m; ++k) {
        const RealVector& ek = fr.e[k];
        const RealVector& pek = fr.phi_e[k];
        // printed as <phi V, e_k>; the Codazzi side gives <V, phi e_k>
        const double cross = t == Transcription::literal ? phiv.dot(ek) : v.dot(pek);
        const double a = (7.0 + e * h) * ej.dot(v) * v.dot(pek) + (1.0 - e * h) * pej.dot(v) * v.dot(ek) -
                         (1.0 + e * h) * (lpl * ej).dot(ek);
        const double b = -(7.0 + e * h) * ej.dot(v) * v.dot(ek) + (1.0 - e * h) * pej.dot(v) * cross +
                         (1.0 + e * h) * (sd.phi * lpl * ej).dot(ek);
        out += 0.5 * c * (a * ek + b * pek);
      }
    } else if (d == FrameDisplay::w_phi_e) {
      const RealVector& ej = fr.e[j];
      const RealVector& pej = fr.phi_e[j];
      out += 4.0 * c * (e + h) * v.dot(pej) * fr.W;
      for (int k = 0; k < m; ++k) {
        const RealVector& ek = fr.e[k];
        const RealVector& pek = fr.phi_e[k];
        const double a = (7.0 + e * h) * v.dot(pej) * v.dot(pek) - (1.0 - e * h) * v.dot(ej) * v.dot(ek) -
                         (1.0 + e * h) * (lpl * pej).dot(ek);
        const double b = -(7.0 + e * h) * pej.dot(v) * v.dot(ek) - (1.0 - e * h) * ej.dot(v) * v.dot(pek) -
                         (1.0 + e * h) * (lpl * pej).dot(pek);
        out += 0.5 * c * (a * ek + b * pek);
      }
    } else {
      const RealVector& ej = fr.e[j];
      const RealVector& pej = fr.phi_e[j];
      const RealVector& el = fr.e[l];
      const RealVector& pel = fr.phi_e[l];
      const double quad = v.dot(pel) * v.dot(pej) + v.dot(el) * v.dot(ej);
      const double mixed = (lpl * pel).dot(ej);
      out += c * ((3.0 + e * h) * quad - (1.0 + e * h) * mixed) * fr.W;
      const double common = 3.0 * quad - 2.0 * mixed;
      const RealVector lej = li * ej;
      const RealVector lpel = li * pel;
      const RealVector lplej = lpl * ej;
      const RealVector lplpel = lpl * pel;
      for (int k = 0; k < m; ++k) {
        const RealVector& ek = fr.e[k];
        const RealVector& pek = fr.phi_e[k];
        const double a = 2.0 * e * (v.dot(pel) * lej.dot(ek) - v.dot(ej) * lpel.dot(ek)) -
                         e * (v.dot(el) * lplej.dot(ek) + v.dot(pej) * lplpel.dot(ek)) +
                         e * v.dot(pek) * common;
        const double b = 2.0 * e * (v.dot(pel) * lej.dot(pek) - v.dot(ej) * lpel.dot(pek)) -
                         e * (v.dot(el) * lplej.dot(pek) + v.dot(pej) * lplpel.dot(pek)) -
                         e * v.dot(ek) * common;
        out += 0.5 * c * (a * ek + b * pek);
      }
    }
  }
  return out;
}

double codazzi_w_component(const StructuralSample& ss, const RealVector& e) {
  double s = 0.0;
  for (int i = 0; i < 2; ++i) s += 4.0 * ss.c[i] * (kEps[i] + ss.sd.h) * e.dot(ss.sd.V);
  return s;
}

RealVector frame_components(const AdaptedFrame& fr, const RealVector& v) {
  const int m = static_cast<int>(fr.e.size());
  RealVector out(2 * m + 1);
  out(0) = fr.W.dot(v);
  for (int k = 0; k < m; ++k) {
    out(1 + 2 * k) = fr.e[k].dot(v);
    out(2 + 2 * k) = fr.phi_e[k].dot(v);
  }
  return out;
}

WLambdaTerms w_lambda_terms(const StructuralSample& ss, const AdaptedFrame& fr, int j) {
  const int m = static_cast<int>(fr.e.size());
  if (j < 0 || j >= m) throw UsageError("frame index out of range");
  const StructuralData& sd = ss.sd;
  const RealVector& v = sd.V;
  const double h = sd.h;
  const RealVector& ej = fr.e[j];
  const RealVector& pej = fr.phi_e[j];
  WLambdaTerms out;
  for (int i = 0; i < 2; ++i) {
    const double e = kEps[i];
    const Endomorphism lpl = sd.L[i] * sd.phi * sd.L[i];
    out.trace_e[i] = (lpl * ej).dot(ej);
    out.trace_phi_e[i] = (sd.phi * lpl * pej).dot(ej);
    out.from_e += 0.5 * ss.c[i] *
                  ((7.0 + e * h) * ej.dot(v) * v.dot(pej) + (1.0 - e * h) * pej.dot(v) * v.dot(ej) -
                   (1.0 + e * h) * out.trace_e[i]);
    out.from_phi_e += 0.5 * ss.c[i] *
                      (-(7.0 + e * h) * pej.dot(v) * v.dot(ej) - (1.0 - e * h) * ej.dot(v) * v.dot(pej) +
                       (1.0 + e * h) * out.trace_phi_e[i]);
  }
  return out;
}

double w_lambda_cancellation(const StructuralSample& ss, const AdaptedFrame& fr, int j) {
  const WLambdaTerms t = w_lambda_terms(ss, fr, j);
  return std::abs(t.from_e + t.from_phi_e);
}

RealVector umbilic_mean_curvature_gradient(const StructuralSample& ss) {
  double s = 0.0;
  for (int i = 0; i < 2; ++i) s += ss.c[i] * (kEps[i] + ss.sd.h);
  return 4.0 * s * ss.sd.V;
}

RealVector gradient_from_frame(const StructuralSample& ss, const AdaptedFrame& fr) {
  RealVector out = RealVector::Zero(ss.dim());
  for (size_t j = 0; j < fr.e.size(); ++j) {
    const int jj = static_cast<int>(j);
    const double dej = fr.W.dot(frame_codazzi_rhs(ss, fr, FrameDisplay::w_e, jj));
    const double dpej = fr.W.dot(frame_codazzi_rhs(ss, fr, FrameDisplay::w_phi_e, jj));
    out += dej * fr.e[j] + dpej * fr.phi_e[j];
  }
  return out;
}

RealVector gauss_rhs_closed_form(const StructuralSample& ss, const Endomorphism& A, const RealVector& x,
                                 const RealVector& y, const RealVector& z, GaussReading reading) {
  require_tangent(ss, x, "Gauss X");
  require_tangent(ss, y, "Gauss Y");
  require_tangent(ss, z, "Gauss Z");
  const StructuralData& sd = ss.sd;
  const RealVector& v = sd.V;
  const RealVector& w = sd.W;
  RealVector out = RealVector::Zero(ss.dim());
  for (int i = 0; i < 2; ++i) {
    // `s` is 1 for the printed reading and eps_i for the weighted one.
    const double e = kEps[i];
    const double s = reading == GaussReading::literal ? 1.0 : e;
    const Endomorphism& l = sd.L[i];
    const RealVector lx = l * x, ly = l * y, lz = l * z;
    const RealVector plx = sd.phi * lx, ply = sd.phi * ly, plz = sd.phi * lz;
    RealVector t = wedge(lx, ly, lz) + wedge(plx, ply, lz);
    t += v.dot(z) * (v.dot(y) * lx - v.dot(x) * ly +
                     s * (ly.dot(w) * (plx - s * v.dot(x) * w) - lx.dot(w) * (ply - s * v.dot(y) * w)));
    const RealVector u = v.dot(x) * ply - v.dot(y) * plx;
    t += s * wedge(u, w, lz);
    t += 2.0 * (lx.dot(ply - s * v.dot(y) * w) + e * ly.dot(w) * v.dot(x)) * (plz - s * v.dot(z) * w);
    out += 0.5 * ss.c[i] * t;
  }
  out += wedge(A * x, A * y, z);
  return out;
}

RealVector gauss_tangential_direct(const StructuralSample& ss, const Endomorphism& A, const RealVector& x,
                                   const RealVector& y, const RealVector& z) {
  require_tangent(ss, x, "Gauss X");
  require_tangent(ss, y, "Gauss Y");
  require_tangent(ss, z, "Gauss Z");
  const RealVector rbar =
      curvature_product_formula(ss.c, ss.amb, ss.to_ambient(x), ss.to_ambient(y), ss.to_ambient(z));
  return ss.to_frame(rbar) + wedge(A * x, A * y, z);
}

std::vector<NamedValue> structure_residuals(const StructuralData& sd, const RealVector& x, const RealVector& y) {
  const RealVector& v = sd.V;
  const RealVector& w = sd.W;
  const double h = sd.h;
  const Endomorphism& phi = sd.phi;
  const Endomorphism& f = sd.f;
  std::vector<NamedValue> out{
      {"V.W", std::abs(v.dot(w))},
      {"phi^2", (phi * (phi * x) + x - x.dot(w) * w).norm()},
      {"|W|", std::abs(w.dot(w) - 1.0)},
      {"phi W", (phi * w).norm()},
      {"f symmetric", (f - f.transpose()).cwiseAbs().maxCoeff()},
      {"f V", (f * v + h * v).norm()},
      {"h^2+|V|^2", std::abs(h * h + v.dot(v) - 1.0)},
      {"f phi", (f * (phi * x) + w.dot(x) * v - phi * (f * x) + v.dot(x) * w).norm()},
      {"f W", (f * w - h * w + phi * v).norm()},
      {"f^2", (f * (f * x) - x + v.dot(x) * v).norm()},
      {"fX.fY", std::abs((f * x).dot(f * y) - x.dot(y) + v.dot(x) * v.dot(y))},
  };
  for (int i = 0; i < 2; ++i) {
    const double e = kEps[i];
    const Endomorphism& l = sd.L[i];
    const RealVector lw = l * w;
    const std::string tag = "[" + std::to_string(i + 1) + "]";
    out.push_back({"L phi L W" + tag, (l * (phi * lw) - (e - h) * v).norm()});
    out.push_back({"L W.W" + tag, std::abs(lw.dot(w) - 1.0 - e * h)});
    out.push_back({"L V" + tag, (l * v - (1.0 - e * h) * v).norm()});
    out.push_back({"V.L W" + tag, std::abs(v.dot(lw))});
  }
  return out;
}

std::vector<NamedValue> frame_residuals(const StructuralData& sd, const AdaptedFrame& fr) {
  const int m = sd.dim();
  Eigen::MatrixXd all(m, m);
  all.col(0) = fr.W;
  for (size_t k = 0; k < fr.e.size(); ++k) {
    all.col(1 + 2 * static_cast<int>(k)) = fr.e[k];
    all.col(2 + 2 * static_cast<int>(k)) = fr.phi_e[k];
  }
  std::vector<NamedValue> out{
      {"frame orthonormal", (all.transpose() * all - Eigen::MatrixXd::Identity(m, m)).cwiseAbs().maxCoeff()}};
  for (int i = 0; i < 2; ++i) {
    const double e = kEps[i];
    const RealVector lw = sd.L[i] * sd.W;
    double r_phi = 0.0, r_e = 0.0;
    for (size_t k = 0; k < fr.e.size(); ++k) {
      r_phi = std::max(r_phi, std::abs(lw.dot(fr.phi_e[k]) + e * sd.V.dot(fr.e[k])));
      r_e = std::max(r_e, std::abs(lw.dot(fr.e[k]) - e * sd.V.dot(fr.phi_e[k])));
    }
    const std::string tag = "[" + std::to_string(i + 1) + "]";
    out.push_back({"L W.phi e" + tag, r_phi});
    out.push_back({"L W.e" + tag, r_e});
  }
  return out;
}

namespace {
Eigen::Matrix2d obstruction_matrix(double h) {
  Eigen::Matrix2d m;
  m << kEps[0] + h, kEps[1] + h, 1.0, 1.0;
  return m;
}
}  // namespace

double obstruction_system_determinant(double h) { return obstruction_matrix(h).determinant(); }

std::array<double, 2> solve_obstruction_system(double h, const std::array<double, 2>& rhs) {
  const Eigen::Vector2d sol =
      obstruction_matrix(h).completeOrthogonalDecomposition().solve(Eigen::Vector2d(rhs[0], rhs[1]));
  return {sol(0), sol(1)};
}

}  // namespace cq
