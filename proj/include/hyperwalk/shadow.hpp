#pragma once

#include "hyperwalk/report.hpp"
#include "hyperwalk/sampling.hpp"
#include "hyperwalk/space.hpp"

namespace hyperwalk {

/// S_base(target, radius) = { z : (target . z)_base >= d(base, target) - radius }
struct ShadowSpec {
  Point base;
  Point target;
  double radius = 0.0;
};

bool in_shadow(const ModelSpace& space, const ShadowSpec& s, const Point& z);

/// Which radius verify_shadow_merge asserts for the enlarged shadow.
enum class MergeRadius {
  /// max{d(x0,x2) - d(x0,x1) + R1, R2} + 2 delta
  Max,
  /// min{d(x0,x2) - d(x0,x1) + R1, R2} + 2 delta
  Min,
};

double merge_radius(const ModelSpace& space, const ShadowSpec& s1, const ShadowSpec& s2, MergeRadius form);

/// For shadows with a common base that intersect, checks that sampled
/// members of s1 lie in S_x0(x2, merge_radius). Inconclusive when no
/// point of the intersection is found among the samples.
CheckReport verify_shadow_merge(const ModelSpace& space, const ShadowSpec& s1, const ShadowSpec& s2,
                                const SampleSpec& samples, MergeRadius form = MergeRadius::Max);

/// For sampled a in S_x(y,R) and b outside S_x(y,R+A+K), checks d(a,b) >= A.
/// worst_margin is (smallest observed gap) - A. Requires
/// d(x,y) >= A + R + 2K.
CheckReport verify_nested_gap(const ModelSpace& space, const ShadowSpec& s, double a, double k,
                              const SampleSpec& samples);

/// Checks S_x(z, d(x,z)-R-K) subset X \ S_z(x,R) subset S_x(z, d(x,z)-R+K)
/// on samples. Requires R >= 2K and d(x,z) >= R + K.
CheckReport verify_complement_sandwich(const ModelSpace& space, const Point& x, const Point& z, double r, double k,
                                       const SampleSpec& samples);

/// How the radii r and s of verify_rebase are read.
enum class RebaseRadius {
  /// As in ShadowSpec: S_z(x, r) = { w : (x.w)_z >= d(z,x) - r }.
  Deficit,
  /// As a depth from the base: { w : (x.w)_z >= r }, i.e. S_z(x, d(z,x) - r).
  Depth,
};

/// When (x.y)_z <= r - A, checks S_z(x,r) subset S_y(x,s) with
/// s = d(x,y) - d(x,z) + r - B on samples; vacuous otherwise.
CheckReport verify_rebase(const ModelSpace& space, const Point& x, const Point& y, const Point& z, double r,
                          double a, double b, const SampleSpec& samples,
                          RebaseRadius convention = RebaseRadius::Deficit);

}  // namespace hyperwalk
