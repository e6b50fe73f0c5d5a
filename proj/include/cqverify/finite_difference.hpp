// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <type_traits>

#include "cqverify/errors.hpp"
#include "cqverify/linalg.hpp"

namespace cq {

inline constexpr double kDefaultStep = 1e-4;

inline void require_valid_step(double step) {
  if (!(step >= 1e-6 && step <= 1e-3)) {
    throw UsageError("finite-difference step must lie in [1e-6, 1e-3]");
  }
}

/// Partial derivative of f along coordinate `dir` at x: central differences
/// at h and h/2 combined by one Richardson level, (4 D(h/2) - D(h)) / 3.
/// Works for any f returning double or an Eigen dense object.
template <class F>
auto richardson_partial(F&& f, const RealVector& x, int dir, double h) {
  using T = std::decay_t<decltype(f(x))>;
  auto central = [&](double s) -> T {
    RealVector xp = x;
    RealVector xm = x;
    xp(dir) += s;
    xm(dir) -= s;
    T fp = f(xp);
    T fm = f(xm);
    return T((fp - fm) / (2.0 * s));
  };
  T coarse = central(h);
  T fine = central(0.5 * h);
  return T((4.0 * fine - coarse) / 3.0);
}

}  // namespace cq
