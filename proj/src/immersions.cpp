// SPDX-License-Identifier: Apache-2.0
#include "cqverify/immersions.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "cqverify/errors.hpp"
#include "cqverify/model_spec.hpp"

namespace cq {
namespace {

ParameterBox box(std::array<double, 3> lo, std::array<double, 3> hi) {
  return ParameterBox{RealVector{{lo[0], lo[1], lo[2]}}, RealVector{{hi[0], hi[1], hi[2]}}};
}

// Exponents (i, j, k) of all monomials x^i y^j z^k with i + j + k <= 3.
std::vector<std::array<int, 3>> cubic_monomials() {
  std::vector<std::array<int, 3>> out;
  for (int i = 0; i <= 3; ++i)
    for (int j = 0; i + j <= 3; ++j)
      for (int k = 0; i + j + k <= 3; ++k) out.push_back({i, j, k});
  return out;
}

double ipow(double x, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

}  // namespace

Immersion flat_slice() {
  auto map = [](const RealVector& u) { return RealVector{{0.0, u(0), u(1), u(2)}}; };
  auto jac = [](const RealVector&) {
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(4, 3);
    j(1, 0) = 1.0;
    j(2, 1) = 1.0;
    j(3, 2) = 1.0;
    return j;
  };
  return Immersion("e1", 4, map, jac, box({-1.0, -1.5, -1.5}, {1.0, 1.5, 1.5}));
}

Immersion chart_sphere(double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw UsageError("chart_sphere: radius must be positive");
  auto map = [r](const RealVector& u) {
    const double a = u(0), b = u(1), c = u(2);
    return RealVector{{r * std::cos(a), r * std::sin(a) * std::cos(b),
                       r * std::sin(a) * std::sin(b) * std::cos(c),
                       r * std::sin(a) * std::sin(b) * std::sin(c)}};
  };
  auto jac = [r](const RealVector& u) {
    const double a = u(0), b = u(1), c = u(2);
    const double sa = std::sin(a), ca = std::cos(a), sb = std::sin(b), cb = std::cos(b);
    const double sc = std::sin(c), cc = std::cos(c);
    Eigen::MatrixXd j(4, 3);
    j << -sa, 0.0, 0.0,
         ca * cb, -sa * sb, 0.0,
         ca * sb * cc, sa * cb * cc, -sa * sb * sc,
         ca * sb * sc, sa * cb * sc, sa * sb * cc;
    return Eigen::MatrixXd(r * j);
  };
  const double pi = std::numbers::pi;
  return Immersion("e2(r=" + std::to_string(r) + ")", 4, map, jac,
                   box({0.3, 0.3, -pi + 0.1}, {pi - 0.3, pi - 0.3, pi - 0.1}));
}

Immersion random_graph(std::uint64_t seed, double amplitude) {
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) {
    throw UsageError("random_graph: amplitude must be finite and non-negative");
  }
  const auto monomials = cubic_monomials();
  std::vector<double> coeff(monomials.size());
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-amplitude, amplitude);
  for (double& c : coeff) c = dist(rng);

  auto poly = [monomials, coeff](const RealVector& u) {
    double p = 0.0;
    for (size_t t = 0; t < monomials.size(); ++t) {
      const auto& e = monomials[t];
      p += coeff[t] * ipow(u(0), e[0]) * ipow(u(1), e[1]) * ipow(u(2), e[2]);
    }
    return p;
  };
  auto grad = [monomials, coeff](const RealVector& u) {
    RealVector g = RealVector::Zero(3);
    for (size_t t = 0; t < monomials.size(); ++t) {
      const auto& e = monomials[t];
      const std::array<double, 3> pw{ipow(u(0), e[0]), ipow(u(1), e[1]), ipow(u(2), e[2])};
      for (int v = 0; v < 3; ++v) {
        if (e[v] == 0) continue;
        double term = coeff[t] * e[v] * ipow(u(v), e[v] - 1);
        for (int w = 0; w < 3; ++w)
          if (w != v) term *= pw[w];
        g(v) += term;
      }
    }
    return g;
  };
  auto map = [poly](const RealVector& u) { return RealVector{{u(0), u(1), u(2), poly(u)}}; };
  auto jac = [grad](const RealVector& u) {
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(4, 3);
    j.topRows(3).setIdentity();
    j.row(3) = grad(u).transpose();
    return j;
  };
  return Immersion("e3(seed=" + std::to_string(seed) + ")", 4, map, jac,
                   box({-0.5, -0.5, -0.5}, {0.5, 0.5, 0.5}));
}

Immersion factor2_plane() {
  auto map = [](const RealVector& u) { return RealVector{{u(0), u(1), u(2), 0.0}}; };
  auto jac = [](const RealVector&) {
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(4, 3);
    j.topRows(3).setIdentity();
    return j;
  };
  return Immersion("factor2_plane", 4, map, jac, box({-1.0, -1.0, -1.0}, {1.0, 1.0, 1.0}));
}

Immersion parse_immersion(std::string_view raw) {
  const std::string text = strip_whitespace(raw);
  const auto open = text.find('(');
  const std::string head = text.substr(0, open);
  std::vector<std::pair<std::string, std::string>> args;
  if (open != std::string::npos) {
    if (text.back() != ')') throw UsageError("malformed immersion '" + text + "'");
    std::string body = text.substr(open + 1, text.size() - open - 2);
    size_t pos = 0;
    while (pos < body.size()) {
      const size_t comma = body.find(',', pos);
      const std::string item = body.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
      const size_t eq = item.find('=');
      if (eq == std::string::npos) throw UsageError("immersion argument '" + item + "' must be key=value");
      args.emplace_back(item.substr(0, eq), item.substr(eq + 1));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
  }
  const auto reject_unknown = [&](std::initializer_list<std::string_view> allowed) {
    for (const auto& [k, v] : args) {
      bool ok = false;
      for (auto a : allowed) ok = ok || k == a;
      if (!ok) throw UsageError("unknown argument '" + k + "' for immersion " + head);
    }
  };

  if (head == "e1") {
    reject_unknown({});
    return flat_slice();
  }
  if (head == "e2") {
    reject_unknown({"r"});
    double r = 0.5;
    for (const auto& [k, v] : args) r = parse_real(v, "e2 radius r");
    return chart_sphere(r);
  }
  if (head == "e3") {
    reject_unknown({"seed", "amp"});
    long long seed = 7;
    double amp = 0.1;
    for (const auto& [k, v] : args) {
      if (k == "seed") seed = parse_integer(v, "e3 seed");
      else amp = parse_real(v, "e3 amplitude amp");
    }
    return random_graph(static_cast<std::uint64_t>(seed), amp);
  }
  throw UsageError("unknown immersion '" + text + "' (expected e1, e2(r=..), e3(seed=..,amp=..))");
}

}  // namespace cq
