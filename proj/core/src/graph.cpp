#include "sparsecut/graph.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sparsecut/detail/cut_enumeration.hpp"
#include "sparsecut/errors.hpp"

namespace sparsecut {

WeightedGraph::WeightedGraph(Eigen::MatrixXd w) : w_(std::move(w)) {
  if (w_.rows() != w_.cols()) throw InputError("weight matrix must be square");
  if (w_.rows() == 0) throw InputError("graph has no vertices");
  const int n = size();
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      const double x = w_(u, v);
      if (!std::isfinite(x)) throw InputError("non-finite weight");
      if (x < 0.0) throw InputError("negative weight");
      if (x != w_(v, u)) throw InputError("weight matrix is not symmetric");
    }
  }
  total_ = w_.sum();
  if (!(total_ > 0.0)) throw InputError("zero total weight");
  for (int u = 0; u < n; ++u)
    for (int v = u; v < n; ++v)
      if (w_(u, v) > 0.0) edges_.push_back({u, v, w_(u, v)});
}

WeightedGraph WeightedGraph::from_edges(int n, std::span<const Edge> edges) {
  if (n <= 0) throw InputError("graph has no vertices");
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (const Edge& e : edges) {
    if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n)
      throw InputError("vertex index out of range");
    if (e.w < 0.0) throw InputError("negative weight");
    w(e.u, e.v) += e.w;
    if (e.u != e.v) w(e.v, e.u) += e.w;
  }
  return WeightedGraph(std::move(w));
}

WeightedGraph WeightedGraph::normalized_graph() const {
  return WeightedGraph(w_ / total_);
}

InstancePair::InstancePair(WeightedGraph g_in, WeightedGraph h_in)
    : g(std::move(g_in)), h(std::move(h_in)) {
  if (g.size() != h.size())
    throw InputError("G and H must share the vertex set");
}

Cut::Cut(int n, std::vector<Vertex> members)
    : members_(std::move(members)), mask_(static_cast<std::size_t>(n), 0) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
  for (Vertex v : members_) {
    if (v < 0 || v >= n) throw InputError("cut member out of range");
    mask_[static_cast<std::size_t>(v)] = 1;
  }
}

Cut Cut::from_mask(std::span<const char> in_cut) {
  std::vector<Vertex> members;
  for (std::size_t v = 0; v < in_cut.size(); ++v)
    if (in_cut[v]) members.push_back(static_cast<Vertex>(v));
  return Cut(static_cast<int>(in_cut.size()), std::move(members));
}

Cut Cut::complement() const {
  std::vector<Vertex> rest;
  for (int v = 0; v < universe(); ++v)
    if (!contains(v)) rest.push_back(v);
  return Cut(universe(), std::move(rest));
}

bool lexicographically_less(const Cut& a, const Cut& b) {
  return std::lexicographical_compare(a.members().begin(), a.members().end(),
                                      b.members().begin(), b.members().end());
}

double cut_weight(const WeightedGraph& g, const Cut& s) {
  if (s.universe() != g.size()) throw InputError("cut and graph sizes differ");
  double crossing = 0.0;
  for (const Edge& e : g.edges())
    if (s.contains(e.u) != s.contains(e.v)) crossing += e.w;
  return 2.0 * crossing / g.total();
}

SparsityReport sparsity(const InstancePair& pair, const Cut& s) {
  SparsityReport r;
  r.g_cut = cut_weight(pair.g, s);
  r.h_cut = cut_weight(pair.h, s);
  r.sigma = r.h_cut > 0.0 ? r.g_cut / r.h_cut : kInfiniteSparsity;
  return r;
}

Eigen::MatrixXd laplacian(const WeightedGraph& g) {
  const int n = g.size();
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  const double scale = 2.0 / g.total();
  for (const Edge& e : g.edges()) {
    if (e.u == e.v) continue;
    const double w = scale * e.w;
    l(e.u, e.u) += w;
    l(e.v, e.v) += w;
    l(e.u, e.v) -= w;
    l(e.v, e.u) -= w;
  }
  return l;
}

std::optional<Rank1Measure> rank1_decompose(const WeightedGraph& h, double tol) {
  const Eigen::MatrixXd hbar = h.weights() / h.total();
  Rank1Measure m;
  m.mu = hbar.colwise().sum().transpose();
  m.f = m.mu * std::sqrt(h.total());
  const Eigen::MatrixXd residual = hbar - m.mu * m.mu.transpose();
  m.max_deviation = residual.cwiseAbs().maxCoeff();
  if (m.max_deviation > tol * hbar.maxCoeff()) return std::nullopt;
  return m;
}

namespace {

void require_exhaustive(int n) {
  if (n < 2) throw InputError("need at least 2 vertices for a cut");
  if (n > kExhaustiveLimit)
    throw InputError("instance too large for exhaustive enumeration (n = " +
                     std::to_string(n) + " > " +
                     std::to_string(kExhaustiveLimit) + ")");
}

// Minimizes crossing(S) / denominator(S) over all nontrivial cuts, ties going
// to the lexicographically smallest side containing vertex 0.
template <typename Denominator>
CutValue minimize_ratio(const WeightedGraph& g, Denominator&& denominator) {
  require_exhaustive(g.size());
  detail::CrossingTracker tracker(g);
  double best_num = 0.0;
  double best_den = 0.0;
  std::vector<char> best_mask;
  int members = 1;
  detail::for_each_cut(g.size(), [&](const std::vector<char>& in_cut, Vertex v,
                                     bool proper) {
    if (v < 0) tracker.reset(in_cut);
    else {
      tracker.flipped(v, in_cut);
      members += in_cut[v] ? 1 : -1;
    }
    if (!proper) return;
    const double den = denominator(in_cut, members);
    if (!(den > 0.0)) return;
    const double num = tracker.crossing();
    if (best_mask.empty()) {
      best_num = num, best_den = den, best_mask = in_cut;
      return;
    }
    const double lhs = num * best_den;
    const double rhs = best_num * den;
    const double slack = 1e-12 * std::max(std::abs(lhs), std::abs(rhs));
    bool better = lhs < rhs - slack;
    if (!better && std::abs(lhs - rhs) <= slack)
      better = lexicographically_less(Cut::from_mask(in_cut), Cut::from_mask(best_mask));
    if (better) best_num = num, best_den = den, best_mask = in_cut;
  });
  if (best_mask.empty()) throw InputError("no cut with a positive denominator");
  CutValue out;
  out.cut = Cut::from_mask(best_mask);
  // Recompute without accumulated rounding.
  double crossing = 0.0;
  for (const Edge& e : g.edges())
    if (out.cut.contains(e.u) != out.cut.contains(e.v)) crossing += e.w;
  out.value = crossing / denominator(out.cut.mask(), out.cut.size());
  return out;
}

}  // namespace

CutValue cheeger_constant(const WeightedGraph& g) {
  const int n = g.size();
  const double avg_degree = g.total() / n;
  return minimize_ratio(g, [&](const std::vector<char>&, int members) {
    return avg_degree * std::min(members, n - members);
  });
}

CutValue conductance(const WeightedGraph& g) {
  const Eigen::VectorXd deg = g.degrees();
  const double vol_total = deg.sum();
  return minimize_ratio(g, [&](const std::vector<char>& in_cut, int) {
    double vol = 0.0;
    for (std::size_t v = 0; v < in_cut.size(); ++v)
      if (in_cut[v]) vol += deg[static_cast<Eigen::Index>(v)];
    return std::min(vol, vol_total - vol);
  });
}

}  // namespace sparsecut
