#pragma once

#include <optional>
#include <span>
#include <vector>

#include "hyperwalk/word.hpp"

namespace hyperwalk {

/// Folded (Stallings) graph of a finitely generated subgroup H of F_rank.
///
/// Reduced words readable from the base vertex are exactly the vertices of
/// the convex hull of the orbit H.1 in the Cayley tree; the readable words
/// that end back at the base are the elements of H. Everything the
/// quasiconvex-set layer needs about subgroup orbits (membership, nearest
/// orbit points, set-to-set distances) is answered from this graph.
class SubgroupGraph {
 public:
  static constexpr int kNone = -1;

  SubgroupGraph(int rank, std::span<const Word> generators);

  int rank() const { return rank_; }
  int base() const { return 0; }
  int vertex_count() const { return static_cast<int>(dist_to_base_.size()); }

  /// Target of the edge labelled l out of v, or kNone.
  int follow(int v, Letter l) const { return next_[static_cast<std::size_t>(v * 2 * rank_ + letter_index(l))]; }

  /// Number of leading letters of w readable from the base; the vertex
  /// reached is written to *end when non-null.
  std::size_t readable_prefix(const Word& w, int* end = nullptr) const;

  bool contains(const Word& w) const;

  /// Graph distance from v back to the base vertex.
  int distance_to_base(int v) const { return dist_to_base_[static_cast<std::size_t>(v)]; }

  /// Label of the shortest path from v to the base, choosing the smallest
  /// letter (canonical order) at every step among shortest continuations.
  Word path_to_base(int v) const;

  /// True when the orbit H.1 equals the vertex set of its hull (one vertex).
  bool orbit_is_hull() const { return vertex_count() == 1; }

  /// Number of undirected edges.
  std::size_t edge_count() const;

 private:
  int rank_;
  std::vector<int> next_;
  std::vector<int> dist_to_base_;
};

}  // namespace hyperwalk
