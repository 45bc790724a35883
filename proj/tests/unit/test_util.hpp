#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "sparsecut/graph.hpp"

namespace testutil {

inline sparsecut::WeightedGraph unit_graph(int n, std::vector<std::pair<int, int>> pairs) {
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (auto [u, v] : pairs) w(u, v) = w(v, u) = 1.0;
  return sparsecut::WeightedGraph(w);
}

inline sparsecut::WeightedGraph cycle(int n) {
  std::vector<std::pair<int, int>> pairs;
  for (int v = 0; v < n; ++v) pairs.emplace_back(v, (v + 1) % n);
  return unit_graph(n, pairs);
}

inline sparsecut::WeightedGraph complete(int n) {
  std::vector<std::pair<int, int>> pairs;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) pairs.emplace_back(u, v);
  return unit_graph(n, pairs);
}

/// (1/total) sum over ordered (u, v) of w(u,v) |1_S(u) - 1_S(v)|, straight
/// from the definition.
inline double naive_cut_weight(const sparsecut::WeightedGraph& g, const sparsecut::Cut& s) {
  double sum = 0.0, total = 0.0;
  for (int u = 0; u < g.size(); ++u)
    for (int v = 0; v < g.size(); ++v) {
      total += g.weight(u, v);
      if (s.contains(u) != s.contains(v)) sum += g.weight(u, v);
    }
  return sum / total;
}

inline double naive_quadratic_form(const sparsecut::WeightedGraph& g, const Eigen::VectorXd& x) {
  double sum = 0.0, total = 0.0;
  for (int u = 0; u < g.size(); ++u)
    for (int v = 0; v < g.size(); ++v) {
      total += g.weight(u, v);
      sum += g.weight(u, v) * (x[u] - x[v]) * (x[u] - x[v]);
    }
  return sum / total;
}

/// Minimum sparsity by plain bitmask enumeration of every subset.
inline double naive_opt(const sparsecut::InstancePair& p) {
  const int n = p.size();
  double best = sparsecut::kInfiniteSparsity;
  for (std::uint64_t mask = 1; mask + 1 < (std::uint64_t{1} << n); ++mask) {
    std::vector<int> members;
    for (int v = 0; v < n; ++v)
      if (mask >> v & 1) members.push_back(v);
    const sparsecut::Cut s(n, members);
    const double h = naive_cut_weight(p.h, s);
    if (h > 0.0) best = std::min(best, naive_cut_weight(p.g, s) / h);
  }
  return best;
}

}  // namespace testutil
