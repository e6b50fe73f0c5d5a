// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "cqverify/connection.hpp"
#include "cqverify/errors.hpp"
#include "cqverify/finite_difference.hpp"
#include "cqverify/linalg.hpp"

using namespace cq;

namespace {

Eigen::MatrixXd random_spd(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> nd;
  Eigen::MatrixXd b(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) b(i, j) = nd(rng);
  return b * b.transpose() + n * Eigen::MatrixXd::Identity(n, n);
}

RealVector random_vec(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> nd;
  RealVector v(n);
  for (int i = 0; i < n; ++i) v(i) = nd(rng);
  return v;
}

}  // namespace

TEST(MetricMatrix, RejectsAsymmetric) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(2, 2);
  m(0, 1) = 1e-3;
  EXPECT_THROW(MetricMatrix{m}, UsageError);
}

TEST(MetricMatrix, RejectsIndefinite) {
  Eigen::MatrixXd m(2, 2);
  m << 1, 0, 0, -1;
  EXPECT_THROW(MetricMatrix{m}, DegeneracyError);
}

TEST(MetricMatrix, SolveAndInverse) {
  std::mt19937_64 rng(3);
  const MetricMatrix g(random_spd(rng, 5));
  const RealVector b = random_vec(rng, 5);
  EXPECT_LT((g.entries() * g.solve(b) - b).norm(), 1e-12);
  EXPECT_LT((g.entries() * g.inverse() - Eigen::MatrixXd::Identity(5, 5)).norm(), 1e-12);
  EXPECT_NEAR(g.norm(b) * g.norm(b), b.dot(g.entries() * b), 1e-10);
}

TEST(Wedge, Convention) {
  // (X^Y)Z = <Y,Z>X - <X,Z>Y
  const MetricMatrix g = MetricMatrix::identity(3);
  const RealVector x = RealVector::Unit(3, 0), y = RealVector::Unit(3, 1);
  EXPECT_LT((wedge_apply(x, y, y, g) - x).norm(), 1e-15);
  EXPECT_LT((wedge_apply(x, y, x, g) + y).norm(), 1e-15);
  EXPECT_LT(wedge_apply(x, y, RealVector::Unit(3, 2), g).norm(), 1e-15);
}

TEST(Wedge, SkewInXYAndAntisymmetricOperator) {
  std::mt19937_64 rng(5);
  const MetricMatrix g(random_spd(rng, 4));
  for (int t = 0; t < 20; ++t) {
    const RealVector x = random_vec(rng, 4), y = random_vec(rng, 4), z = random_vec(rng, 4), w = random_vec(rng, 4);
    EXPECT_LT((wedge_apply(x, y, z, g) + wedge_apply(y, x, z, g)).norm(), 1e-12);
    EXPECT_NEAR(g.inner(wedge_apply(x, y, z, g), w), -g.inner(z, wedge_apply(x, y, w, g)), 1e-10);
  }
}

TEST(GramSchmidt, OrthonormalInMetric) {
  std::mt19937_64 rng(11);
  const MetricMatrix g(random_spd(rng, 6));
  std::vector<RealVector> in;
  for (int i = 0; i < 4; ++i) in.push_back(random_vec(rng, 6));
  const auto out = gram_schmidt(in, g);
  ASSERT_EQ(out.size(), 4u);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) EXPECT_NEAR(g.inner(out[i], out[j]), i == j ? 1.0 : 0.0, 1e-12);
  EXPECT_GT(g.inner(out[0], in[0]), 0.0);
}

TEST(GramSchmidt, DependentInputThrows) {
  const MetricMatrix g = MetricMatrix::identity(3);
  std::vector<RealVector> in{RealVector::Unit(3, 0), 2.0 * RealVector::Unit(3, 0)};
  EXPECT_THROW(gram_schmidt(in, g), DegeneracyError);
}

TEST(Adjoint, DefiningProperty) {
  std::mt19937_64 rng(17);
  const MetricMatrix g(random_spd(rng, 4));
  Eigen::MatrixXd p = Eigen::MatrixXd::Random(4, 4);
  const Endomorphism pa = adjoint(p, g);
  const RealVector x = random_vec(rng, 4), y = random_vec(rng, 4);
  EXPECT_NEAR(g.inner(p * x, y), g.inner(x, pa * y), 1e-10);
}

TEST(OpDistance, MatchesOrthonormalFrameComputation) {
  std::mt19937_64 rng(19);
  const Eigen::MatrixXd gm = random_spd(rng, 3);
  const MetricMatrix g(gm);
  const Eigen::MatrixXd p = Eigen::MatrixXd::Random(3, 3);
  // In a g-orthonormal basis E (E^T g E = I) the operator is E^{-1} P E.
  const Eigen::MatrixXd l = g.cholesky_factor();
  const Eigen::MatrixXd e = l.transpose().inverse();
  const Eigen::MatrixXd in_frame = e.inverse() * p * e;
  EXPECT_NEAR(op_distance(p, Eigen::MatrixXd::Zero(3, 3), g), in_frame.norm(), 1e-12);
}

TEST(RelativeResidual, FloorAndScale) {
  const RealVector a = RealVector::Constant(2, 1.0);
  EXPECT_DOUBLE_EQ(relative_residual(a, a), 0.0);
  EXPECT_NEAR(relative_residual(2.0 * a, a), 1.0, 1e-15);
  EXPECT_NEAR(relative_residual(RealVector::Constant(2, 1e-13), RealVector::Zero(2), 1e-12),
              std::sqrt(2.0) * 0.1, 1e-15);
}

TEST(Richardson, PolynomialIsExactUpToRoundoff) {
  // Central difference plus one Richardson level is exact through degree 4.
  const auto f = [](const RealVector& x) { return std::pow(x(0), 4) - 3.0 * x(0) * x(0) * x(1) + x(1); };
  RealVector x(2);
  x << 0.7, -0.3;
  EXPECT_NEAR(richardson_partial(f, x, 0, 1e-3), 4.0 * std::pow(0.7, 3) - 6.0 * 0.7 * -0.3, 1e-9);
  EXPECT_NEAR(richardson_partial(f, x, 1, 1e-3), -3.0 * 0.49 + 1.0, 1e-9);
}

TEST(Richardson, FourthOrderConvergence) {
  const auto f = [](const RealVector& x) { return std::sin(3.0 * x(0)); };
  RealVector x(1);
  x << 0.4;
  const double exact = 3.0 * std::cos(1.2);
  const double e1 = std::abs(richardson_partial(f, x, 0, 1e-2) - exact);
  const double e2 = std::abs(richardson_partial(f, x, 0, 5e-3) - exact);
  EXPECT_GT(e1 / e2, 12.0);  // ~16 for fourth order
}

TEST(Step, ValidRange) {
  EXPECT_NO_THROW(require_valid_step(1e-4));
  EXPECT_THROW(require_valid_step(1e-7), UsageError);
  EXPECT_THROW(require_valid_step(1e-2), UsageError);
}

TEST(Christoffel, FlatMetricInPolarCoordinates) {
  // g = diag(1, r^2): Gamma^r_tt = -r, Gamma^t_rt = 1/r.
  RealVector x(2);
  x << 2.0, 0.3;
  Eigen::MatrixXd g(2, 2);
  g << 1, 0, 0, 4.0;
  std::vector<Eigen::MatrixXd> dg(2, Eigen::MatrixXd::Zero(2, 2));
  dg[0](1, 1) = 2.0 * x(0);
  const Christoffel gam = christoffel_from_metric(MetricMatrix(g), dg);
  EXPECT_NEAR(gam(0, 1, 1), -2.0, 1e-14);
  EXPECT_NEAR(gam(1, 0, 1), 0.5, 1e-14);
  EXPECT_NEAR(gam(1, 1, 0), 0.5, 1e-14);
  EXPECT_NEAR(gam(0, 0, 0), 0.0, 1e-14);
}

TEST(Riemann, RoundTwoSphere) {
  // g = diag(1, sin^2 th) in (th, ph); K = 1, so R(X,Y)Z = <Y,Z>X - <X,Z>Y.
  const ChristoffelField field = [](const RealVector& x) {
    Christoffel c(2);
    const double s = std::sin(x(0)), co = std::cos(x(0));
    c(0, 1, 1) = -s * co;
    c(1, 0, 1) = co / s;
    c(1, 1, 0) = co / s;
    return c;
  };
  RealVector x(2);
  x << 1.1, 0.2;
  const RiemannTensor r = riemann_from_christoffel(field, x, 1e-4);
  Eigen::MatrixXd g(2, 2);
  g << 1, 0, 0, std::pow(std::sin(1.1), 2);
  const MetricMatrix gm(g);
  const RealVector a = RealVector::Unit(2, 0), b = RealVector::Unit(2, 1);
  const RealVector lhs = r.apply(a, b, b);
  EXPECT_LT((lhs - wedge_apply(a, b, b, gm)).norm(), 1e-8);
}
