#pragma once

#include "hyperwalk/qconvex.hpp"
#include "hyperwalk/report.hpp"

namespace hyperwalk {

struct CoarseConstants {
  double A = 1.0;
  double B = 0.0;
  double C = 0.0;
};

/// With x the projection of y to D: if (x.z)_y <= d(x,y) - A, asserts
///   d(D,z) >= d(x,y) + d(y,z) - 2 (x.z)_y - B
/// and |(x.z)_y - (x'.z)_y| <= C for members x' of D within
/// d(x,y) + member_radius of y.
CheckReport check_one_quasiconvex(const ModelSpace& space, const QuasiconvexSet& d, const Point& y, const Point& z,
                                  const CoarseConstants& consts, double member_radius = 6.0);

/// With x, z the projections of y to D and E: if
/// (x.z)_y <= min{d(x,y), d(y,z)} - A, asserts
///   d(D,E) >= d(x,y) + d(y,z) - 2 (x.z)_y - B
/// and |(x.z)_y - (x'.z')_y| <= C over nearby members x' of D, z' of E.
CheckReport check_two_quasiconvex(const ModelSpace& space, const QuasiconvexSet& d, const QuasiconvexSet& e,
                                  const Point& y, const CoarseConstants& consts, double member_radius = 6.0);

}  // namespace hyperwalk
