// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "cqverify/hypersurface.hpp"

namespace cq {

/// Pointwise structural data together with the ambient linear model it came
/// from.  Tangent vectors are frame components (Euclidean inner product);
/// `frame` maps them to ambient vectors.
struct StructuralSample {
  AmbientStructure amb;
  Eigen::MatrixXd frame;
  RealVector nu;
  StructuralData sd;
  std::array<double, 2> c{0.0, 0.0};
  int n1 = 1;
  int n2 = 1;

  int dim() const { return sd.dim(); }
  RealVector to_ambient(const RealVector& v) const { return frame * v; }
  RealVector to_frame(const RealVector& v) const { return frame.transpose() * (amb.g.entries() * v); }
};

/// Linear model on R^(2n): identity metric, standard J, F = diag(+1 x 2n1,
/// -1 x 2n2), and the given unit normal.  The tangent frame is an orthonormal
/// completion of nu, randomized by `seed`.
StructuralSample sample_from_normal(int n1, int n2, const std::array<double, 2>& c, const RealVector& nu,
                                    std::uint64_t seed);
/// Same with a normal drawn uniformly from the unit sphere.
StructuralSample synth_structural(std::uint64_t seed, int n1, int n2, const std::array<double, 2>& c);
/// The sample carried by an immersed point.
StructuralSample sample_at_point(const ProductSpec& spec, const HypersurfacePoint& pt);

// ---- Codazzi right-hand side ---------------------------------------------

/// sum_i (c_i/2)[2 eps_i L_i((Y^X)V) + L_i phi L_i((Y^X) L_i W)
///               + (3 eps_i <(Y^X)V, L_i W> + 2 <X, L_i phi L_i Y>) L_i W]
RealVector codazzi_rhs_closed_form(const StructuralSample& ss, const RealVector& y, const RealVector& x);
/// -(Rbar(X,Y) nu)^T from the ambient curvature; the oracle for the above.
RealVector codazzi_rhs_from_curvature(const StructuralSample& ss, const RealVector& y, const RealVector& x);

/// Specialization Y = W:
/// sum_i (c_i/2)[(7 eps_i + h)<X,V> L_i W + <X, L_i W>(eps_i - h) V - (1 + eps_i h) L_i phi L_i X]
RealVector codazzi_rhs_with_w(const StructuralSample& ss, const RealVector& x);

/// sum_i 4 c_i (1 - h^2)[(eps_i + h) W - phi V]
RealVector codazzi_w_v(const StructuralSample& ss);

// ---- Adapted-frame expansions ----------------------------------------------

enum class FrameDisplay { w_e, w_phi_e, e_phi_e };

/// How the first expansion is read.  `literal` takes the phi e_k coefficient
/// term (1 - eps h)<phi e_j, V><phi V, e_k> as printed; `corrected` uses
/// <V, phi e_k>, which is what the Codazzi right side produces.
enum class Transcription { literal, corrected };

const char* to_string(FrameDisplay d);

/// Arguments (Y, X) of the Codazzi operator that the display expands:
/// (W, e_j), (W, phi e_j) or (e_j, phi e_l).
std::array<RealVector, 2> frame_display_arguments(const AdaptedFrame& fr, FrameDisplay d, int j, int l);

/// The selected expansion in the adapted frame; j, l are zero-based.
RealVector frame_codazzi_rhs(const StructuralSample& ss, const AdaptedFrame& fr, FrameDisplay d, int j,
                             int l = 0, Transcription t = Transcription::literal);

/// sum_i 4 c_i (eps_i + h) <e, V>: the W-component of the Codazzi operator at (W, e).
double codazzi_w_component(const StructuralSample& ss, const RealVector& e);

/// Components of a tangent vector in the adapted frame, ordered
/// (W, e_1, phi e_1, e_2, phi e_2, ...).
RealVector frame_components(const AdaptedFrame& fr, const RealVector& v);

// ---- Umbilical case --------------------------------------------------------

/// The diagonal (k = j) right sides of the two W lambda equations, with the
/// trace terms kept.
struct WLambdaTerms {
  double from_e = 0.0;      ///< built from d(W, e_j) . e_j
  double from_phi_e = 0.0;  ///< built from d(W, phi e_j) . phi e_j
  /// <L_i phi L_i e_j, e_j> and <phi L_i phi L_i phi e_j, e_j>, per factor.
  std::array<double, 2> trace_e{0.0, 0.0};
  std::array<double, 2> trace_phi_e{0.0, 0.0};
};

WLambdaTerms w_lambda_terms(const StructuralSample& ss, const AdaptedFrame& fr, int j);
/// |from_e + from_phi_e|.
double w_lambda_cancellation(const StructuralSample& ss, const AdaptedFrame& fr, int j);

/// 4 (sum_i c_i (eps_i + h)) V
RealVector umbilic_mean_curvature_gradient(const StructuralSample& ss);
/// sum_j (e_j lambda) e_j + (phi e_j lambda) phi e_j with the directional
/// derivatives read off the W-components of the frame expansions.
RealVector gradient_from_frame(const StructuralSample& ss, const AdaptedFrame& fr);

// ---- Gauss equation --------------------------------------------------------

/// `literal` evaluates the printed expansion as typeset, reading the bracketed
/// wedge as ((<V,X> phi L_i Y - <V,Y> phi L_i X) ^ W) L_i Z.  `eps_weighted`
/// attaches eps_i to the V-W cross terms of the second factor, the form that
/// the ambient curvature actually produces.
enum class GaussReading { literal, eps_weighted };

/// The expansion of R(X,Y)Z, including (AX ^ AY)Z.  A in frame components.
RealVector gauss_rhs_closed_form(const StructuralSample& ss, const Endomorphism& A, const RealVector& x,
                                 const RealVector& y, const RealVector& z,
                                 GaussReading reading = GaussReading::literal);
/// (Rbar(X,Y)Z)^T + (AX ^ AY)Z.
RealVector gauss_tangential_direct(const StructuralSample& ss, const Endomorphism& A, const RealVector& x,
                                   const RealVector& y, const RealVector& z);

// ---- Pointwise structure identities ----------------------------------------

struct NamedValue {
  std::string name;
  double value = 0.0;
};

/// Absolute residuals of the algebraic relations among phi, W, f, V, h, L_i,
/// evaluated on the test vectors x, y.
std::vector<NamedValue> structure_residuals(const StructuralData& sd, const RealVector& x, const RealVector& y);
/// Orthonormality of the adapted frame and the two L_i W coefficient
/// relations, maximized over k.
std::vector<NamedValue> frame_residuals(const StructuralData& sd, const AdaptedFrame& fr);

// ---- Parallel shape operator -----------------------------------------------

/// Determinant of the system sum_i c_i (eps_i + h) = 0, sum_i c_i = 0 in (c_1, c_2).
double obstruction_system_determinant(double h);
/// Least-squares solution (c_1, c_2) of the system with right side `rhs`.
std::array<double, 2> solve_obstruction_system(double h, const std::array<double, 2>& rhs);

}  // namespace cq
