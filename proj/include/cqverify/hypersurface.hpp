// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "cqverify/finite_difference.hpp"
#include "cqverify/product.hpp"

namespace cq {

struct ParameterBox {
  RealVector lo;
  RealVector hi;

  int dim() const { return static_cast<int>(lo.size()); }
  bool contains(const RealVector& u, double margin = 0.0) const;
};

/// A parametrized hypersurface u -> chart coordinates of the product.
class Immersion {
 public:
  using Map = std::function<RealVector(const RealVector&)>;
  using Jacobian = std::function<Eigen::MatrixXd(const RealVector&)>;

  /// `jacobian` may be empty; a Richardson central difference of `map` is used then.
  Immersion(std::string name, int ambient_dim, Map map, Jacobian jacobian, ParameterBox domain);

  const std::string& name() const { return name_; }
  int ambient_dim() const { return ambient_dim_; }
  int param_dim() const { return ambient_dim_ - 1; }
  const ParameterBox& domain() const { return domain_; }

  RealVector coords(const RealVector& u) const;
  /// ambient_dim x param_dim matrix of partials d coords / d u.
  Eigen::MatrixXd jacobian(const RealVector& u) const;
  ProductPoint point(const ProductSpec& spec, const RealVector& u) const;
  /// Uniform sample from the domain shrunk by `margin` on every side.
  RealVector sample_parameter(std::mt19937_64& rng, double margin) const;

 private:
  std::string name_;
  int ambient_dim_;
  Map map_;
  Jacobian jacobian_;
  ParameterBox domain_;
};

/// Pointwise extrinsic data.  Tangent objects (A, and everything in
/// StructuralData) are expressed in the induced-orthonormal `frame`, so their
/// inner product is the Euclidean one on R^(2n-1).
struct HypersurfacePoint {
  RealVector u;
  ProductPoint q;
  MetricMatrix g;
  /// Columns d x / d u_a.
  Eigen::MatrixXd tangent_basis;
  /// g-orthonormal tangent frame; frame = tangent_basis * frame_coeffs.
  Eigen::MatrixXd frame;
  Eigen::MatrixXd frame_coeffs;
  RealVector nu;
  Endomorphism A;
  double H = 0.0;
  /// Normal component of -nabla-bar nu, which vanishes for an exact computation.
  double shape_normal_leak = 0.0;

  int dim() const { return static_cast<int>(frame.cols()); }
  /// Frame components -> ambient vector.
  RealVector to_ambient(const RealVector& v) const { return frame * v; }
  /// Ambient vector -> frame components of its tangential part.
  RealVector to_frame(const RealVector& v) const { return frame.transpose() * (g.entries() * v); }
  /// Frame components -> coefficients in the coordinate basis d/du_a.
  RealVector to_parameter(const RealVector& v) const { return frame_coeffs * v; }
  /// Coordinate-basis coefficients -> frame components.
  RealVector from_parameter(const RealVector& w) const;
};

/// Tangential and normal parts of J and F along the hypersurface:
/// JX = phi X + <W,X> nu,  FX = f X + <V,X> nu,  F nu = V + h nu,  W = -J nu.
struct StructuralData {
  Endomorphism phi;
  RealVector W;
  Endomorphism f;
  RealVector V;
  double h = 0.0;
  /// L_i = I + eps_i f.
  std::array<Endomorphism, 2> L;

  int dim() const { return static_cast<int>(W.size()); }
};

/// Orthonormal frame {W, e_j, phi e_j} of the tangent space (frame components).
struct AdaptedFrame {
  RealVector W;
  std::vector<RealVector> e;
  std::vector<RealVector> phi_e;
};

/// Unit normal at u: g-orthogonal to the tangent space, oriented so that
/// det[tangent_basis | nu] > 0.  Throws DegeneracyError on rank loss.
RealVector unit_normal(const Immersion& imm, const ProductSpec& spec, const RealVector& u);

/// Full pointwise data; A from A X = -nabla-bar_X nu with d nu / du taken numerically.
HypersurfacePoint point_data(const Immersion& imm, const ProductSpec& spec, const RealVector& u,
                             double step = kDefaultStep);

/// Independent route to A: G^{-1} II with II_ab = <nabla-bar_a d_b, nu>, using
/// numerical second derivatives of the map instead of derivatives of nu.
/// Returned in the frame of `pt`.
Endomorphism shape_operator_second_form(const Immersion& imm, const ProductSpec& spec,
                                        const HypersurfacePoint& pt, double step = kDefaultStep);

StructuralData structural_data_from_frame(const MetricMatrix& g, const Endomorphism& J,
                                          const Endomorphism& F, const Eigen::MatrixXd& frame,
                                          const RealVector& nu);
StructuralData induced_structures(const HypersurfacePoint& pt, const AmbientStructure& amb);

/// Greedy frame: random unit e_1 orthogonal to W, then phi e_1, then e_2
/// orthogonal to everything so far, ...  Throws DegeneracyError if the result
/// misses orthonormality by more than 1e-8.
AdaptedFrame adapted_frame(const StructuralData& sd, std::uint64_t seed);

/// Numerically differentiated Codazzi tensor at one parameter value.
class NumericCodazzi {
 public:
  NumericCodazzi(HypersurfacePoint pt, std::vector<std::vector<RealVector>> d)
      : pt_(std::move(pt)), d_(std::move(d)) {}

  const HypersurfacePoint& point() const { return pt_; }
  /// (nabla_X A) Y - (nabla_Y A) X for frame components y, x, returned in
  /// frame components.  Argument order is (Y, X).
  RealVector operator()(const RealVector& y, const RealVector& x) const;

 private:
  HypersurfacePoint pt_;
  // d_[a][b] = (nabla_a A) d_b - (nabla_b A) d_a, ambient
  std::vector<std::vector<RealVector>> d_;
};

NumericCodazzi codazzi_numeric(const Immersion& imm, const ProductSpec& spec, const RealVector& u,
                               double step = kDefaultStep);

/// (nabla_X A) Y - (nabla_Y A) X at u; y and x in frame components of point_data(u).
RealVector d_nabla_A_numeric(const Immersion& imm, const ProductSpec& spec, const RealVector& u,
                             const RealVector& y, const RealVector& x, double step = kDefaultStep);

/// Intrinsic curvature of the induced metric, from numerically differentiated
/// induced Christoffel symbols.
class IntrinsicCurvature {
 public:
  IntrinsicCurvature(HypersurfacePoint pt, RiemannTensor r) : pt_(std::move(pt)), r_(std::move(r)) {}
  const HypersurfacePoint& point() const { return pt_; }
  /// R(X,Y)Z with all vectors in frame components.
  RealVector operator()(const RealVector& x, const RealVector& y, const RealVector& z) const;

 private:
  HypersurfacePoint pt_;
  RiemannTensor r_;
};

IntrinsicCurvature intrinsic_curvature_numeric(const Immersion& imm, const ProductSpec& spec,
                                               const RealVector& u, double step = kDefaultStep);

/// Gradient of the mean curvature H(u) in frame components.
RealVector mean_curvature_gradient_numeric(const Immersion& imm, const ProductSpec& spec,
                                           const RealVector& u, double step = kDefaultStep);

/// |A - H I| in the induced metric.
double umbilicity_deviation(const HypersurfacePoint& pt);

struct FInvarianceReport {
  int samples = 0;
  int skipped = 0;
  double max_V = 0.0;
  /// max |f^2 - I|_F; equals |V|^2 pointwise.
  double max_f2_deviation = 0.0;
  bool invariant = false;           ///< max |V| <= tol
  /// max |f^2 - I| <= tol.  Since |f^2 - I| = |V|^2 the two verdicts can only
  /// differ for tol < max |V| <= sqrt(tol); a square root here would turn
  /// roundoff in f^2 into a spurious 1e-8.
  bool f2_criterion = false;
  bool criteria_agree = false;
};

FInvarianceReport classify_F_invariance(const Immersion& imm, const ProductSpec& spec,
                                        const std::vector<RealVector>& samples, double tol,
                                        double step = kDefaultStep);

}  // namespace cq
