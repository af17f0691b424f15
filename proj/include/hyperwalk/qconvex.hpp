#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

#include "hyperwalk/space.hpp"
#include "hyperwalk/subgroup_graph.hpp"

namespace hyperwalk {

/// Raised when an orbit search cannot certify that it saw every candidate.
class SearchExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// translate . <generators> . x0
struct SubgroupOrbit {
  std::vector<Word> generators;
  Word translate;
};

struct ExplicitVertexSet {
  std::vector<Point> points;
};

/// Bi-infinite geodesic of the half-plane given by its ideal endpoints
/// (either may be +inf).
struct GeodesicLine {
  double from = 0.0;
  double to = 0.0;
};

using SetRepresentation = std::variant<SubgroupOrbit, ExplicitVertexSet, GeodesicLine>;

/// A Q-quasiconvex subset of a model space. Used as a stand-in for the
/// disc sets of a Heegaard splitting.
class QuasiconvexSet {
 public:
  /// In the tree the quasiconvexity constant is computed exactly; in the
  /// half-plane it must be supplied.
  static QuasiconvexSet subgroup_orbit(const ModelSpace& space, std::vector<Word> generators,
                                       Word translate = {}, std::optional<double> q_const = std::nullopt);
  /// The orbit of <generator>: for a single letter this is the axis of that letter.
  static QuasiconvexSet axis(const ModelSpace& space, const Word& generator, Word translate = {});
  static QuasiconvexSet vertex_set(const ModelSpace& space, std::vector<Point> points, double q_const);
  static QuasiconvexSet geodesic_line(const ModelSpace& space, double from, double to);

  const SetRepresentation& representation() const { return rep_; }
  double q_const() const { return q_const_; }
  /// Folded graph of the subgroup for tree orbits, null otherwise.
  const SubgroupGraph* graph() const { return graph_.get(); }
  bool is_tree_orbit() const { return graph_ != nullptr; }
  /// Left translate of the subgroup orbit (identity for other kinds).
  const Word& translate() const;

  /// g . D
  QuasiconvexSet translated(const ModelSpace& space, const Word& g) const;

  std::string describe() const;

 private:
  SetRepresentation rep_;
  double q_const_ = 0.0;
  std::shared_ptr<const SubgroupGraph> graph_;
};

struct Projection {
  Point point;
  double distance = 0.0;
};

bool contains(const ModelSpace& space, const QuasiconvexSet& set, const Point& p);

/// A closest point of the set to y. Ties: shortest then canonical
/// lexicographic path from the hull entry point (tree orbits), shortlex
/// least word (explicit tree sets), foot of the perpendicular (lines),
/// first listed point (explicit half-plane sets).
Projection project(const ModelSpace& space, const QuasiconvexSet& set, const Point& y);

/// d(set, y), without building the projection point where avoidable.
double distance_to_set(const ModelSpace& space, const QuasiconvexSet& set, const Point& y);

/// d(D, E) = inf over pairs. Exact for tree orbits, explicit sets and
/// pairs of geodesic lines; throws std::invalid_argument for unsupported
/// half-plane combinations.
double set_distance(const ModelSpace& space, const QuasiconvexSet& d, const QuasiconvexSet& e);

/// Members of the set within `radius` of `center`. Lines are sampled at
/// arclength spacing `line_step`. Throws SearchExhausted when more than
/// max_count points qualify or a half-plane orbit search does not close.
std::vector<Point> members_near(const ModelSpace& space, const QuasiconvexSet& set, const Point& center,
                                double radius, std::size_t max_count = 100000, double line_step = 0.5);

/// Maximum depth (in subgroup generators) explored for half-plane orbits.
inline constexpr int kHalfPlaneOrbitDepth = 8;

}  // namespace hyperwalk
