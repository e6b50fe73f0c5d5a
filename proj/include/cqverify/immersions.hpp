// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string_view>

#include "cqverify/hypersurface.hpp"

namespace cq {

// Stock hypersurfaces of a four-dimensional product (n1 = n2 = 1), written
// in chart coordinates (x1, y1, x2, y2).

/// u -> (0, u1, u2, u3): the imaginary axis of factor 1 times the factor-2
/// chart box.  F-invariant (normal in factor 1) and totally geodesic when the
/// imaginary axis is a geodesic of factor 1, which holds for all three kinds.
Immersion flat_slice();

/// The coordinate 3-sphere |z|^2 + |w|^2 = r^2 in hyperspherical angles
/// (a, b, c) -> r (cos a, sin a cos b, sin a sin b cos c, sin a sin b sin c).
Immersion chart_sphere(double r);

/// Graph y2 = P(x1, y1, x2) of a cubic with coefficients uniform in
/// [-amplitude, amplitude] drawn from `seed`, over the box [-0.5, 0.5]^3.
Immersion random_graph(std::uint64_t seed, double amplitude);

/// u -> (u1, u2, u3, 0): normal along factor 2 (V = 0, h = -1).
Immersion factor2_plane();

/// Parses e1 | e2(r=value) | e3(seed=int, amp=value); whitespace-insensitive.
/// Defaults: r = 0.5, seed = 7, amp = 0.1.  Throws UsageError.
Immersion parse_immersion(std::string_view text);

}  // namespace cq
