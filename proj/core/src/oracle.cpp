#include "sparsecut/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <string>

#include "sparsecut/errors.hpp"

namespace sparsecut {
namespace {

struct Adjacency {
  explicit Adjacency(const WeightedGraph& g) : offsets(g.size() + 1, 0) {
    for (const Edge& e : g.edges()) {
      if (e.u == e.v) continue;
      ++offsets[e.u + 1];
      ++offsets[e.v + 1];
    }
    for (int v = 0; v < g.size(); ++v) offsets[v + 1] += offsets[v];
    targets.resize(offsets.back());
    weights.resize(offsets.back());
    std::vector<int> fill(offsets.begin(), offsets.end() - 1);
    for (const Edge& e : g.edges()) {
      if (e.u == e.v) continue;
      targets[fill[e.u]] = e.v, weights[fill[e.u]++] = e.w;
      targets[fill[e.v]] = e.u, weights[fill[e.v]++] = e.w;
    }
  }

  double crossing(std::uint64_t mask) const {
    double c = 0.0;
    for (int u = 0; u + 1 < static_cast<int>(offsets.size()); ++u) {
      if (!((mask >> u) & 1)) continue;
      for (int k = offsets[u]; k < offsets[u + 1]; ++k)
        if (!((mask >> targets[k]) & 1)) c += weights[k];
    }
    return c;
  }

  // Change in crossing weight after bit v of mask was toggled.
  double delta(int v, std::uint64_t mask) const {
    const bool side = (mask >> v) & 1;
    double d = 0.0;
    for (int k = offsets[v]; k < offsets[v + 1]; ++k)
      d += (((mask >> targets[k]) & 1) == side) ? -weights[k] : weights[k];
    return d;
  }

  std::vector<int> offsets;
  std::vector<int> targets;
  std::vector<double> weights;
};

// Lexicographic order of the sorted member lists of two masks.
bool mask_less(std::uint64_t a, std::uint64_t b) {
  if (a == b) return false;
  const int v = std::countr_zero(a ^ b);
  if ((a >> v) & 1) return (b >> v) != 0;
  return (a >> v) == 0;
}

}  // namespace

OracleResult brute_force_opt(const InstancePair& pair, const OracleOptions& options) {
  const int n = pair.size();
  if (n < 2) throw InputError("need at least 2 vertices for a cut");
  if (n > options.max_vertices || n > 63)
    throw InputError("instance too large for oracle (n = " + std::to_string(n) +
                     " > " + std::to_string(std::min(options.max_vertices, 63)) + ")");

  const Adjacency g_adj(pair.g);
  // Rank-1 demands reduce H(S) to F(S) * (F(V) - F(S)), an O(1) update.
  const auto rank1 = rank1_decompose(pair.h, 1e-12);
  const Adjacency h_adj(pair.h);
  Eigen::VectorXd f;
  double f_total = 0.0;
  if (rank1) {
    f = rank1->f;
    f_total = f.sum();
  }
  auto h_crossing_scratch = [&](std::uint64_t mask, double& f_in) {
    if (!rank1) return h_adj.crossing(mask);
    f_in = 0.0;
    for (int v = 0; v < n; ++v)
      if ((mask >> v) & 1) f_in += f[v];
    return f_in * (f_total - f_in);
  };

  // Crossing demand below this is rounding residue of an uncut H.
  const double h_floor = 1e-12 * (rank1 ? f_total * f_total : pair.h.total());
  const std::uint64_t full = (n == 64) ? ~0ULL : ((1ULL << n) - 1);
  const std::uint64_t count = 1ULL << (n - 1);
  constexpr std::uint64_t kResync = 1ULL << 16;

  std::uint64_t mask = 1;
  double g_cross = g_adj.crossing(mask);
  double f_in = 0.0;
  double h_cross = h_crossing_scratch(mask, f_in);

  bool found = false;
  std::uint64_t best_mask = 0;
  double best_g = 0.0;
  double best_h = 1.0;

  for (std::uint64_t i = 0; i < count; ++i) {
    if (i > 0) {
      const int v = std::countr_zero(i) + 1;
      mask ^= 1ULL << v;
      if ((i & (kResync - 1)) == 0) {
        g_cross = g_adj.crossing(mask);
        h_cross = h_crossing_scratch(mask, f_in);
      } else {
        g_cross += g_adj.delta(v, mask);
        if (rank1) {
          f_in += ((mask >> v) & 1) ? f[v] : -f[v];
          h_cross = f_in * (f_total - f_in);
        } else {
          h_cross += h_adj.delta(v, mask);
        }
      }
    }
    if (mask == full || !(h_cross > h_floor)) continue;
    if (!found) {
      found = true, best_mask = mask, best_g = g_cross, best_h = h_cross;
      continue;
    }
    const double lhs = g_cross * best_h;
    const double rhs = best_g * h_cross;
    if (lhs > rhs + 1e-12 * std::abs(rhs)) continue;
    if (lhs >= rhs - 1e-12 * std::abs(rhs) && !mask_less(mask, best_mask)) continue;
    best_mask = mask, best_g = g_cross, best_h = h_cross;
  }
  if (!found) throw InputError("no cut separates any demand");

  std::vector<Vertex> members;
  for (int v = 0; v < n; ++v)
    if ((best_mask >> v) & 1) members.push_back(v);
  OracleResult out;
  out.cut = Cut(n, std::move(members));
  out.report = sparsity(pair, out.cut);
  if (!out.report.defined()) throw InputError("no cut separates any demand");
  return out;
}

}  // namespace sparsecut
