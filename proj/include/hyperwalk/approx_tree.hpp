#pragma once

#include <span>
#include <vector>

#include "hyperwalk/space.hpp"

namespace hyperwalk {

/// Finite geodesic tree embedded in a model space and spanning 3 to 5
/// input points. Nodes are points of the space; edges are geodesic
/// segments weighted by their length.
class ApproxTree {
 public:
  struct Edge {
    int a;
    int b;
    double length;
  };

  const std::vector<Point>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  /// Node index of the i-th input point.
  int leaf(std::size_t i) const { return leaves_.at(i); }
  std::size_t leaf_count() const { return leaves_.size(); }

  double tree_distance(int a, int b) const;
  /// Node sequence of the tree geodesic from a to b.
  std::vector<int> path(int a, int b) const;
  /// (x . y)^T_z
  double tree_gromov_product(int z, int x, int y) const;

  /// max over leaf pairs of d_T - d.
  double max_distortion(const ModelSpace& space) const;
  /// min over leaf pairs of d_T - d (nonnegative up to rounding).
  double min_distortion(const ModelSpace& space) const;

 private:
  friend ApproxTree approximate_tree(const ModelSpace&, std::span<const Point>);
  int add_node(Point p);
  void add_edge(int a, int b, double length);
  void remove_edge(std::size_t index);
  std::vector<std::pair<int, double>> neighbours(int v) const;

  std::vector<Point> nodes_;
  std::vector<Edge> edges_;
  std::vector<int> leaves_;
};

/// Builds the tree incrementally: the first two points are joined by a
/// geodesic and each later point is joined by a geodesic to its nearest
/// point on the tree built so far. Because every tree path is a path in
/// the space, d(x, y) <= d_T(x, y) always holds; in a FreeGroupTree the
/// result is the exact spanning subtree. Throws std::invalid_argument
/// unless 3 <= n <= 5 and the points are distinct.
ApproxTree approximate_tree(const ModelSpace& space, std::span<const Point> points);

/// Unique node lying on all three pairwise tree geodesics between leaves.
int tree_center(const ApproxTree& tree, int x, int y, int z);

}  // namespace hyperwalk
