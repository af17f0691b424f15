#include "hyperwalk/shadow.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace hyperwalk {

namespace {

double tolerance(const ModelSpace& space) { return space.is_tree() ? 1e-12 : 1e-9; }

// Where the shadow "begins": the point of [base, target] at distance
// d(base,target) - radius from base.
Point entrance(const ModelSpace& space, const Point& base, const Point& target, double radius) {
  const double d = distance(space, base, target);
  return geodesic_point(space, base, target, std::clamp(d - radius, 0.0, d));
}

std::string describe(const char* what, const Point& p) { return std::string(what) + "=" + to_string(p); }

}  // namespace

bool in_shadow(const ModelSpace& space, const ShadowSpec& s, const Point& z) {
  const double d = distance(space, s.base, s.target);
  const double gp = gromov_product(space, s.base, s.target, z);
  return gp >= d - s.radius - (space.is_tree() ? 0.0 : 1e-12 * std::max(1.0, d));
}

double merge_radius(const ModelSpace& space, const ShadowSpec& s1, const ShadowSpec& s2, MergeRadius form) {
  const double first = distance(space, s1.base, s2.target) - distance(space, s1.base, s1.target) + s1.radius;
  const double r = form == MergeRadius::Max ? std::max(first, s2.radius) : std::min(first, s2.radius);
  return r + 2.0 * space.delta();
}

CheckReport verify_shadow_merge(const ModelSpace& space, const ShadowSpec& s1, const ShadowSpec& s2,
                                const SampleSpec& samples, MergeRadius form) {
  if (distance(space, s1.base, s2.base) > tolerance(space)) {
    throw std::invalid_argument("merged shadows must share a basepoint");
  }
  std::vector<Point> pts = sample_around(space, entrance(space, s1.base, s1.target, s1.radius), samples);
  SampleSpec second = samples;
  second.seed = samples.seed + 1;
  for (Point& p : sample_around(space, entrance(space, s2.base, s2.target, s2.radius), second)) pts.push_back(std::move(p));
  pts.push_back(s1.target);
  pts.push_back(s2.target);

  CheckReport report;
  report.checked = pts.size();
  const bool intersect = std::any_of(pts.begin(), pts.end(),
                                     [&](const Point& p) { return in_shadow(space, s1, p) && in_shadow(space, s2, p); });
  if (!intersect) {
    report.verdict = Verdict::Inconclusive;
    report.notes.push_back("no point of the intersection found among samples");
    return report;
  }
  const ShadowSpec merged{s2.base, s2.target, merge_radius(space, s1, s2, form)};
  const double need = distance(space, merged.base, merged.target) - merged.radius;
  for (const Point& z : pts) {
    if (!in_shadow(space, s1, z)) continue;
    ++report.hypothesis_met;
    const double margin = gromov_product(space, merged.base, merged.target, z) - need;
    report.assert_margin(margin, tolerance(space), [&] {
      std::ostringstream os;
      os << describe("z", z) << " in first shadow but not in S(x2, " << merged.radius << ")";
      return os.str();
    });
  }
  report.finish();
  return report;
}

CheckReport verify_nested_gap(const ModelSpace& space, const ShadowSpec& s, double a, double k,
                              const SampleSpec& samples) {
  const double d = distance(space, s.base, s.target);
  if (d < a + s.radius + 2.0 * k) throw std::invalid_argument("nested gap needs d(x,y) >= A + R + 2K");
  auto pts = sample_around(space, entrance(space, s.base, s.target, s.radius), samples);
  SampleSpec second = samples;
  second.seed = samples.seed + 1;
  for (Point& p : sample_around(space, entrance(space, s.base, s.target, s.radius + a + k), second)) {
    pts.push_back(std::move(p));
  }
  const ShadowSpec outer{s.base, s.target, s.radius + a + k};
  std::vector<const Point*> inside;
  std::vector<const Point*> outside;
  for (const Point& p : pts) {
    if (in_shadow(space, s, p)) inside.push_back(&p);
    if (!in_shadow(space, outer, p)) outside.push_back(&p);
  }
  CheckReport report;
  report.checked = pts.size();
  for (const Point* pa : inside) {
    for (const Point* pb : outside) {
      ++report.hypothesis_met;
      const double gap = distance(space, *pa, *pb);
      report.assert_margin(gap - a, tolerance(space), [&] {
        std::ostringstream os;
        os << describe("a", *pa) << " " << describe("b", *pb) << " gap=" << gap;
        return os.str();
      });
    }
  }
  report.finish();
  return report;
}

CheckReport verify_complement_sandwich(const ModelSpace& space, const Point& x, const Point& z, double r, double k,
                                       const SampleSpec& samples) {
  const double d = distance(space, x, z);
  if (r < 2.0 * k) throw std::invalid_argument("complement sandwich needs R >= 2K");
  if (d < r + k) throw std::invalid_argument("complement sandwich needs d(x,z) >= R + K");
  auto pts = sample_around(space, geodesic_point(space, x, z, r), samples);
  pts.push_back(z);
  const ShadowSpec middle{z, x, r};
  const ShadowSpec left{x, z, d - r - k};
  const ShadowSpec right{x, z, d - r + k};
  CheckReport report;
  report.checked = pts.size();
  for (const Point& w : pts) {
    ++report.hypothesis_met;
    const bool in_left = in_shadow(space, left, w);
    const bool in_complement = !in_shadow(space, middle, w);
    const bool in_right = in_shadow(space, right, w);
    const double gp = gromov_product(space, x, z, w);
    report.assert_holds(!in_left || in_complement, gp - (d - (d - r - k)), [&] {
      return describe("w", w) + " in the smaller shadow but not in the complement";
    });
    report.assert_holds(!in_complement || in_right, 0.0, [&] {
      return describe("w", w) + " in the complement but not in the larger shadow";
    });
  }
  report.finish();
  return report;
}

CheckReport verify_rebase(const ModelSpace& space, const Point& x, const Point& y, const Point& z, double r,
                          double a, double b, const SampleSpec& samples, RebaseRadius convention) {
  CheckReport report;
  if (gromov_product(space, z, x, y) > r - a) {
    report.notes.push_back("hypothesis (x.y)_z <= r - A not met");
    report.finish();
    return report;
  }
  const double s = distance(space, x, y) - distance(space, x, z) + r - b;
  const bool depth = convention == RebaseRadius::Depth;
  const ShadowSpec from_z{z, x, depth ? distance(space, z, x) - r : r};
  const double need = depth ? s : distance(space, y, x) - s;
  auto pts = sample_around(space, entrance(space, z, x, from_z.radius), samples);
  pts.push_back(x);
  report.checked = pts.size();
  for (const Point& w : pts) {
    if (!in_shadow(space, from_z, w)) continue;
    ++report.hypothesis_met;
    const double margin = gromov_product(space, y, x, w) - need;
    report.assert_margin(margin, tolerance(space), [&] {
      std::ostringstream os;
      os << describe("w", w) << " in S_z(x," << r << ") but not in S_y(x," << s << ")";
      return os.str();
    });
  }
  report.finish();
  return report;
}

}  // namespace hyperwalk
