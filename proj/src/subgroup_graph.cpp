#include "hyperwalk/subgroup_graph.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <tuple>

namespace hyperwalk {

namespace {

struct Edge {
  int from;
  Letter label;  // always positive
  int to;
};

int find_root(std::vector<int>& parent, int v) {
  while (parent[static_cast<std::size_t>(v)] != v) {
    parent[static_cast<std::size_t>(v)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])];
    v = parent[static_cast<std::size_t>(v)];
  }
  return v;
}

}  // namespace

SubgroupGraph::SubgroupGraph(int rank, std::span<const Word> generators) : rank_(rank) {
  if (rank < 1 || rank > kMaxRank) throw std::invalid_argument("subgroup graph rank out of range");
  int vertices = 1;
  std::vector<Edge> edges;
  auto add_edge = [&](int u, Letter l, int v) {
    if (std::abs(l) > rank) throw std::invalid_argument("subgroup generator exceeds rank");
    if (l > 0) {
      edges.push_back({u, l, v});
    } else {
      edges.push_back({v, static_cast<Letter>(-l), u});
    }
  };
  for (const Word& g : generators) {
    if (g.empty()) continue;
    int cur = 0;
    for (std::size_t i = 0; i < g.length(); ++i) {
      const int nxt = (i + 1 == g.length()) ? 0 : vertices++;
      add_edge(cur, g[i], nxt);
      cur = nxt;
    }
  }

  // Fold until every vertex has at most one edge per label and direction.
  std::vector<int> parent(static_cast<std::size_t>(vertices));
  std::iota(parent.begin(), parent.end(), 0);
  bool changed = true;
  while (changed) {
    changed = false;
    std::map<std::pair<int, int>, int> out;
    for (const Edge& e : edges) {
      const int u = find_root(parent, e.from);
      const int v = find_root(parent, e.to);
      const std::pair<std::pair<int, int>, int> slots[2] = {{{u, letter_index(e.label)}, v},
                                                            {{v, letter_index(static_cast<Letter>(-e.label))}, u}};
      for (const auto& [key, target] : slots) {
        auto [it, inserted] = out.emplace(key, target);
        if (!inserted) {
          const int a = find_root(parent, it->second);
          const int b = find_root(parent, target);
          if (a != b) {
            parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
            changed = true;
          }
        }
      }
    }
  }

  // Deduplicate edges on representatives.
  std::vector<std::tuple<int, int, int>> folded;
  for (const Edge& e : edges) folded.emplace_back(find_root(parent, e.from), e.label, find_root(parent, e.to));
  std::sort(folded.begin(), folded.end());
  folded.erase(std::unique(folded.begin(), folded.end()), folded.end());

  // Prune hanging trees not containing the base.
  bool pruned = true;
  while (pruned) {
    pruned = false;
    std::map<int, int> degree;
    for (const auto& [u, l, v] : folded) {
      ++degree[u];
      ++degree[v];
    }
    for (auto it = folded.begin(); it != folded.end();) {
      const auto [u, l, v] = *it;
      if ((u != 0 && degree[u] == 1) || (v != 0 && degree[v] == 1)) {
        it = folded.erase(it);
        pruned = true;
      } else {
        ++it;
      }
    }
  }

  // Relabel in BFS order from the base, exploring letters canonically.
  const int letters = 2 * rank;
  std::map<int, std::vector<std::pair<int, int>>> adj;  // vertex -> (letter index, target)
  for (const auto& [u, l, v] : folded) {
    adj[u].emplace_back(letter_index(static_cast<Letter>(l)), v);
    adj[v].emplace_back(letter_index(static_cast<Letter>(-l)), u);
  }
  std::map<int, int> relabel;
  relabel[0] = 0;
  std::queue<int> bfs;
  bfs.push(0);
  std::vector<int> order{0};
  while (!bfs.empty()) {
    const int u = bfs.front();
    bfs.pop();
    auto nbrs = adj[u];
    std::sort(nbrs.begin(), nbrs.end());
    for (const auto& [li, v] : nbrs) {
      if (relabel.emplace(v, static_cast<int>(order.size())).second) {
        order.push_back(v);
        bfs.push(v);
      }
    }
  }
  const int n = static_cast<int>(order.size());
  next_.assign(static_cast<std::size_t>(n * letters), kNone);
  for (const auto& [u, l, v] : folded) {
    const int ru = relabel.at(u);
    const int rv = relabel.at(v);
    next_[static_cast<std::size_t>(ru * letters + letter_index(static_cast<Letter>(l)))] = rv;
    next_[static_cast<std::size_t>(rv * letters + letter_index(static_cast<Letter>(-l)))] = ru;
  }

  dist_to_base_.assign(static_cast<std::size_t>(n), -1);
  dist_to_base_[0] = 0;
  std::queue<int> q;
  q.push(0);
  while (!q.empty()) {
    const int u = q.front();
    q.pop();
    for (int li = 0; li < letters; ++li) {
      const int v = next_[static_cast<std::size_t>(u * letters + li)];
      if (v != kNone && dist_to_base_[static_cast<std::size_t>(v)] < 0) {
        dist_to_base_[static_cast<std::size_t>(v)] = dist_to_base_[static_cast<std::size_t>(u)] + 1;
        q.push(v);
      }
    }
  }
}

std::size_t SubgroupGraph::readable_prefix(const Word& w, int* end) const {
  int v = 0;
  std::size_t i = 0;
  for (; i < w.length(); ++i) {
    const int nxt = follow(v, w[i]);
    if (nxt == kNone) break;
    v = nxt;
  }
  if (end != nullptr) *end = v;
  return i;
}

bool SubgroupGraph::contains(const Word& w) const {
  int end = 0;
  return readable_prefix(w, &end) == w.length() && end == 0;
}

Word SubgroupGraph::path_to_base(int v) const {
  Word path;
  while (v != 0) {
    for (int li = 0; li < 2 * rank_; ++li) {
      const Letter l = letter_from_index(li);
      const int nxt = follow(v, l);
      if (nxt != kNone && distance_to_base(nxt) == distance_to_base(v) - 1) {
        path.append(l);
        v = nxt;
        break;
      }
    }
  }
  return path;
}

std::size_t SubgroupGraph::edge_count() const {
  std::size_t count = 0;
  for (int v : next_) count += (v != kNone) ? 1 : 0;
  return count / 2;
}

}  // namespace hyperwalk
