#include "hyperwalk/approx_tree.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <stdexcept>

#include "hyperwalk/geometry_detail.hpp"

namespace hyperwalk {

int ApproxTree::add_node(Point p) {
  nodes_.push_back(std::move(p));
  return static_cast<int>(nodes_.size()) - 1;
}

void ApproxTree::add_edge(int a, int b, double length) { edges_.push_back({a, b, length}); }

void ApproxTree::remove_edge(std::size_t index) { edges_.erase(edges_.begin() + static_cast<std::ptrdiff_t>(index)); }

std::vector<std::pair<int, double>> ApproxTree::neighbours(int v) const {
  std::vector<std::pair<int, double>> out;
  for (const Edge& e : edges_) {
    if (e.a == v) out.emplace_back(e.b, e.length);
    if (e.b == v) out.emplace_back(e.a, e.length);
  }
  return out;
}

std::vector<int> ApproxTree::path(int a, int b) const {
  const int n = static_cast<int>(nodes_.size());
  if (a < 0 || b < 0 || a >= n || b >= n) throw std::out_of_range("tree node out of range");
  std::vector<int> parent(static_cast<std::size_t>(n), -2);
  parent[static_cast<std::size_t>(a)] = -1;
  std::queue<int> q;
  q.push(a);
  while (!q.empty()) {
    const int u = q.front();
    q.pop();
    for (const auto& [v, len] : neighbours(u)) {
      if (parent[static_cast<std::size_t>(v)] == -2) {
        parent[static_cast<std::size_t>(v)] = u;
        q.push(v);
      }
    }
  }
  std::vector<int> out;
  for (int v = b; v != -1; v = parent[static_cast<std::size_t>(v)]) out.push_back(v);
  std::reverse(out.begin(), out.end());
  return out;
}

double ApproxTree::tree_distance(int a, int b) const {
  const auto p = path(a, b);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    for (const Edge& e : edges_) {
      if ((e.a == p[i] && e.b == p[i + 1]) || (e.b == p[i] && e.a == p[i + 1])) {
        total += e.length;
        break;
      }
    }
  }
  return total;
}

double ApproxTree::tree_gromov_product(int z, int x, int y) const {
  return 0.5 * (tree_distance(z, x) + tree_distance(z, y) - tree_distance(x, y));
}

double ApproxTree::max_distortion(const ModelSpace& space) const {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < leaves_.size(); ++i) {
    for (std::size_t j = i + 1; j < leaves_.size(); ++j) {
      const double gap = tree_distance(leaves_[i], leaves_[j]) -
                         distance(space, nodes_[static_cast<std::size_t>(leaves_[i])],
                                  nodes_[static_cast<std::size_t>(leaves_[j])]);
      worst = std::max(worst, gap);
    }
  }
  return worst;
}

double ApproxTree::min_distortion(const ModelSpace& space) const {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < leaves_.size(); ++i) {
    for (std::size_t j = i + 1; j < leaves_.size(); ++j) {
      const double gap = tree_distance(leaves_[i], leaves_[j]) -
                         distance(space, nodes_[static_cast<std::size_t>(leaves_[i])],
                                  nodes_[static_cast<std::size_t>(leaves_[j])]);
      best = std::min(best, gap);
    }
  }
  return best;
}

ApproxTree approximate_tree(const ModelSpace& space, std::span<const Point> points) {
  if (points.size() < 3 || points.size() > 5) throw std::invalid_argument("approximate_tree needs 3 to 5 points");
  for (const Point& p : points) space.validate(p);
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      if (distance(space, points[i], points[j]) <= detail::kGeomTol) {
        throw std::invalid_argument("approximate_tree points must be distinct");
      }
    }
  }
  const double tol = space.is_tree() ? 0.5 : detail::kGeomTol;

  ApproxTree t;
  const int a = t.add_node(points[0]);
  const int b = t.add_node(points[1]);
  t.add_edge(a, b, distance(space, points[0], points[1]));
  t.leaves_ = {a, b};

  for (std::size_t i = 2; i < points.size(); ++i) {
    const Point& p = points[i];
    std::size_t best_edge = 0;
    SegmentProjection best{};
    best.distance = std::numeric_limits<double>::infinity();
    for (std::size_t e = 0; e < t.edges_.size(); ++e) {
      const auto& edge = t.edges_[e];
      const auto proj = project_to_segment(space, t.nodes_[static_cast<std::size_t>(edge.a)],
                                           t.nodes_[static_cast<std::size_t>(edge.b)], p);
      if (proj.distance < best.distance - detail::kGeomTol) {
        best = proj;
        best_edge = e;
      }
    }
    const ApproxTree::Edge edge = t.edges_[best_edge];
    int attach = 0;
    if (best.offset <= tol) {
      attach = edge.a;
    } else if (best.offset >= edge.length - tol) {
      attach = edge.b;
    } else {
      attach = t.add_node(best.point);
      t.remove_edge(best_edge);
      const Point& pa = t.nodes_[static_cast<std::size_t>(edge.a)];
      const Point& pb = t.nodes_[static_cast<std::size_t>(edge.b)];
      t.add_edge(edge.a, attach, distance(space, pa, best.point));
      t.add_edge(attach, edge.b, distance(space, best.point, pb));
    }
    if (best.distance <= tol) {
      t.leaves_.push_back(attach);
    } else {
      const int leaf = t.add_node(p);
      t.add_edge(attach, leaf, distance(space, t.nodes_[static_cast<std::size_t>(attach)], p));
      t.leaves_.push_back(leaf);
    }
  }
  return t;
}

int tree_center(const ApproxTree& tree, int x, int y, int z) {
  const auto xy = tree.path(x, y);
  const auto yz = tree.path(y, z);
  const auto xz = tree.path(x, z);
  for (int v : xy) {
    if (std::find(yz.begin(), yz.end(), v) != yz.end() && std::find(xz.begin(), xz.end(), v) != xz.end()) return v;
  }
  throw std::logic_error("tree has no center for the given leaves");
}

}  // namespace hyperwalk
