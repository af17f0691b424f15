#pragma once

#include <array>
#include <complex>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "hyperwalk/word.hpp"

namespace hyperwalk {

/// Point of the upper half-plane model; im must be strictly positive.
struct HPoint {
  double re = 0.0;
  double im = 1.0;
  friend bool operator==(const HPoint&, const HPoint&) = default;
};

/// Orientation-preserving isometry z -> (az + b)/(cz + d) of the upper
/// half-plane, normalized to determinant one.
struct Mobius {
  double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

  static Mobius identity() { return {}; }
  /// Hyperbolic translation of length `length` along the geodesic with the
  /// given ideal endpoints (finite, distinct).
  static Mobius translation(double from, double to, double length);
  static Mobius normalized(double a, double b, double c, double d);

  HPoint apply(const HPoint& z) const;
  /// Image of an ideal point; infinity is represented by +inf.
  double apply_ideal(double x) const;
  Mobius inverse() const { return {d, -b, -c, a}; }
  friend Mobius operator*(const Mobius& m, const Mobius& n);
};

using Point = std::variant<Word, HPoint>;

std::string to_string(const Point& p);

enum class SpaceKind { FreeGroupTree, HalfPlane };

/// A computable delta-hyperbolic space together with an action of a free
/// group on it. Trees carry the left-multiplication action of F_rank; the
/// half-plane carries the action generated by `generators()` (image of the
/// i-th free generator).
class ModelSpace {
 public:
  static ModelSpace free_group_tree(int rank);
  static ModelSpace half_plane(double delta = 1.0, std::vector<Mobius> generators = {});

  SpaceKind kind() const { return kind_; }
  bool is_tree() const { return kind_ == SpaceKind::FreeGroupTree; }
  int rank() const { return rank_; }
  double delta() const { return delta_; }
  const std::vector<Mobius>& generators() const { return generators_; }

  /// Default K_T for approximate trees.
  double approx_tree_constant() const { return 4.0 * delta_; }

  /// Basepoint x0: identity word, or i in the half-plane.
  Point basepoint() const;

  /// Throws std::invalid_argument for non-reduced words, letters above the
  /// rank, points of the wrong kind, or im <= 0.
  void validate(const Point& p) const;

  /// Isometry associated with a group element.
  Mobius isometry(const Word& g) const;
  /// g . p
  Point act(const Word& g, const Point& p) const;

  std::string describe() const;

 private:
  SpaceKind kind_ = SpaceKind::FreeGroupTree;
  int rank_ = 2;
  double delta_ = 0.0;
  std::vector<Mobius> generators_;
};

double hyperbolic_distance(const HPoint& a, const HPoint& b);

double distance(const ModelSpace& space, const Point& a, const Point& b);

/// (y . z)_base = (d(base,y) + d(base,z) - d(y,z)) / 2, clamped to
/// [0, min{d(base,y), d(base,z)}] against rounding in the half-plane.
double gromov_product(const ModelSpace& space, const Point& base, const Point& y, const Point& z);

/// (x . z)_w >= min{(x . y)_w, (y . z)_w} - delta for the quadruple (w, x, y, z).
bool verify_four_point(const ModelSpace& space, const std::array<Point, 4>& quadruple, double delta);

/// Largest violation of the four-point inequality over all 12 relabelings
/// of (x, y, z) with base fixed at quadruple[0]; zero or negative in a tree.
double four_point_defect(const ModelSpace& space, const std::array<Point, 4>& quadruple);

/// Point at distance t from u along the geodesic [u, v] (t clamped to the
/// segment; rounded to the nearest vertex in trees).
Point geodesic_point(const ModelSpace& space, const Point& u, const Point& v, double t);

/// Closest point to p on the geodesic segment [u, v] and its offset from u.
struct SegmentProjection {
  Point point;
  double offset = 0.0;
  double distance = 0.0;
};
SegmentProjection project_to_segment(const ModelSpace& space, const Point& u, const Point& v,
                                     const Point& p);

}  // namespace hyperwalk
