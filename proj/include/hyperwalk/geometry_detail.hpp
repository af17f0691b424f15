#pragma once

#include "hyperwalk/space.hpp"

namespace hyperwalk::detail {

/// Slack for floating comparisons in the half-plane.
inline constexpr double kGeomTol = 1e-9;

/// Orientation-preserving map sending ideal point p to 0 and q to infinity.
/// Either endpoint may be +inf.
Mobius line_to_axis(double p, double q);

/// Map sending u to i and v to i * exp(d(u, v)).
Mobius frame_to_axis(const HPoint& u, const HPoint& v);

/// Ideal endpoints of the geodesic through u and v, ordered so that the
/// geodesic runs from .first through u to v and on to .second.
std::pair<double, double> geodesic_endpoints(const HPoint& u, const HPoint& v);

}  // namespace hyperwalk::detail
