#include "hyperwalk/coarse_checks.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hyperwalk/geometry_detail.hpp"

namespace hyperwalk {

namespace {

constexpr double kTol = 1e-9;

std::string fmt(const char* label, double lhs, double rhs) {
  std::ostringstream os;
  os << label << ": lhs=" << lhs << " rhs=" << rhs;
  return os.str();
}

}  // namespace

CheckReport check_one_quasiconvex(const ModelSpace& space, const QuasiconvexSet& d, const Point& y, const Point& z,
                                  const CoarseConstants& consts, double member_radius) {
  CheckReport report;
  report.checked = 1;
  const Projection proj = project(space, d, y);
  const Point& x = proj.point;
  const double dxy = proj.distance;
  const double dyz = distance(space, y, z);
  const double gp = gromov_product(space, y, x, z);
  if (gp > dxy - consts.A) {
    report.notes.push_back("hypothesis not met");
    report.finish();
    return report;
  }
  report.hypothesis_met = 1;
  const double dz = distance_to_set(space, d, z);
  const double bound = dxy + dyz - 2.0 * gp - consts.B;
  report.assert_margin(dz - bound, kTol, [&] {
    return fmt("d(D,z) lower bound", dz, bound) + " x=" + to_string(x) + " z=" + to_string(z);
  });
  for (const Point& xp : members_near(space, d, y, dxy + member_radius)) {
    const double gp2 = gromov_product(space, y, xp, z);
    report.assert_margin(consts.C - std::abs(gp - gp2), kTol, [&] {
      return fmt("product stability", std::abs(gp - gp2), consts.C) + " x'=" + to_string(xp);
    });
  }
  report.finish();
  return report;
}

CheckReport check_two_quasiconvex(const ModelSpace& space, const QuasiconvexSet& d, const QuasiconvexSet& e,
                                  const Point& y, const CoarseConstants& consts, double member_radius) {
  CheckReport report;
  report.checked = 1;
  const Projection px = project(space, d, y);
  const Projection pz = project(space, e, y);
  const Point& x = px.point;
  const Point& z = pz.point;
  const double gp = gromov_product(space, y, x, z);
  if (gp > std::min(px.distance, pz.distance) - consts.A) {
    report.notes.push_back("hypothesis not met");
    report.finish();
    return report;
  }
  report.hypothesis_met = 1;
  const double dde = set_distance(space, d, e);
  const double bound = px.distance + pz.distance - 2.0 * gp - consts.B;
  report.assert_margin(dde - bound, kTol, [&] {
    return fmt("d(D,E) lower bound", dde, bound) + " x=" + to_string(x) + " z=" + to_string(z);
  });
  const auto xs = members_near(space, d, y, px.distance + member_radius);
  const auto zs = members_near(space, e, y, pz.distance + member_radius);
  for (const Point& xp : xs) {
    for (const Point& zp : zs) {
      const double gp2 = gromov_product(space, y, xp, zp);
      report.assert_margin(consts.C - std::abs(gp - gp2), kTol, [&] {
        return fmt("product stability", std::abs(gp - gp2), consts.C) + " x'=" + to_string(xp) + " z'=" +
               to_string(zp);
      });
    }
  }
  report.finish();
  return report;
}

}  // namespace hyperwalk
