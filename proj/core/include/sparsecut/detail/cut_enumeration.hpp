#pragma once

#include <bit>
#include <cstdint>
#include <vector>

#include "sparsecut/graph.hpp"

namespace sparsecut::detail {

/// Maintains the unordered crossing weight sum_{u in S, v not in S} w(u,v)
/// of one graph while vertices are moved across the cut one at a time.
class CrossingTracker {
 public:
  explicit CrossingTracker(const WeightedGraph& g) : adj_(g.size()) {
    for (const Edge& e : g.edges()) {
      if (e.u == e.v) continue;
      adj_[e.u].push_back({e.v, e.w});
      adj_[e.v].push_back({e.u, e.w});
    }
  }

  /// Recomputes from scratch for the given membership mask.
  void reset(const std::vector<char>& in_cut) {
    crossing_ = 0.0;
    for (std::size_t u = 0; u < adj_.size(); ++u) {
      if (!in_cut[u]) continue;
      for (const auto& [v, w] : adj_[u])
        if (!in_cut[v]) crossing_ += w;
    }
  }

  /// Call after in_cut[v] has been toggled.
  void flipped(Vertex v, const std::vector<char>& in_cut) {
    double toward_same = 0.0;
    double toward_other = 0.0;
    for (const auto& [u, w] : adj_[v]) {
      if (in_cut[u] == in_cut[v]) toward_same += w;
      else toward_other += w;
    }
    // Edges to the new side stopped crossing; edges to the old side started.
    crossing_ += toward_other - toward_same;
  }

  double crossing() const { return crossing_; }

 private:
  struct Arc {
    Vertex to;
    double w;
  };
  std::vector<std::vector<Arc>> adj_;
  double crossing_ = 0.0;
};

/// Walks every subset containing vertex 0 in Gray-code order over vertices
/// 1..n-1, so each nontrivial cut is seen exactly once. `visit` is called as
/// visit(in_cut, flipped_vertex, proper) after each single-vertex move; the
/// first call reports S = {0} with flipped_vertex == -1. `proper` is false only
/// for S = V, which trackers must still observe.
template <typename Visit>
void for_each_cut(int n, Visit&& visit) {
  std::vector<char> in_cut(static_cast<std::size_t>(n), 0);
  in_cut[0] = 1;
  int members = 1;
  visit(in_cut, Vertex{-1}, n > 1);
  const std::uint64_t count = std::uint64_t{1} << (n - 1);
  for (std::uint64_t i = 1; i < count; ++i) {
    const Vertex v = std::countr_zero(i) + 1;
    in_cut[v] ^= 1;
    members += in_cut[v] ? 1 : -1;
    visit(in_cut, v, members < n);
  }
}

}  // namespace sparsecut::detail
