#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace sparsecut {

using Vertex = int;

struct Edge {
  Vertex u;
  Vertex v;
  double w;
};

/// Undirected weighted graph stored as a dense symmetric matrix.
///
/// All sums range over ordered vertex pairs: an off-diagonal edge contributes
/// twice to `total()`, a self-loop once. Self-loops never contribute to cuts.
class WeightedGraph {
 public:
  /// Throws InputError unless `w` is square, symmetric, nonnegative and has a
  /// positive total.
  explicit WeightedGraph(Eigen::MatrixXd w);

  /// Builds from a list of unordered edges (u == v is a self-loop). Repeated
  /// pairs accumulate.
  static WeightedGraph from_edges(int n, std::span<const Edge> edges);

  int size() const { return static_cast<int>(w_.rows()); }
  double weight(Vertex u, Vertex v) const { return w_(u, v); }
  double normalized(Vertex u, Vertex v) const { return w_(u, v) / total_; }
  double total() const { return total_; }
  const Eigen::MatrixXd& weights() const { return w_; }

  /// Nonzero entries with u <= v, sorted by (u, v).
  const std::vector<Edge>& edges() const { return edges_; }

  /// Weighted degree d(v) = sum_u w(u, v), self-loop counted once.
  Eigen::VectorXd degrees() const { return w_.colwise().sum().transpose(); }

  /// The graph with weights divided by the total, so that total() == 1.
  WeightedGraph normalized_graph() const;

  bool operator==(const WeightedGraph& other) const { return w_ == other.w_; }

 private:
  Eigen::MatrixXd w_;
  double total_ = 0.0;
  std::vector<Edge> edges_;
};

/// A sparsest-cut instance: G carries the capacities, H the demands.
struct InstancePair {
  InstancePair(WeightedGraph g, WeightedGraph h);

  int size() const { return g.size(); }

  WeightedGraph g;
  WeightedGraph h;
};

/// A vertex subset S of {0..n-1}.
class Cut {
 public:
  Cut() = default;
  /// Members are sorted and deduplicated; throws InputError when out of range.
  Cut(int n, std::vector<Vertex> members);
  static Cut from_mask(std::span<const char> in_cut);

  int universe() const { return static_cast<int>(mask_.size()); }
  const std::vector<Vertex>& members() const { return members_; }
  int size() const { return static_cast<int>(members_.size()); }
  bool contains(Vertex v) const { return mask_[static_cast<std::size_t>(v)] != 0; }
  const std::vector<char>& mask() const { return mask_; }
  bool nontrivial() const { return size() > 0 && size() < universe(); }
  Cut complement() const;

  bool operator==(const Cut& other) const { return mask_ == other.mask_; }

 private:
  std::vector<Vertex> members_;
  std::vector<char> mask_;
};

/// Strict ordering used for every deterministic tie-break on cuts.
bool lexicographically_less(const Cut& a, const Cut& b);

inline constexpr double kInfiniteSparsity = std::numeric_limits<double>::infinity();

struct SparsityReport {
  double sigma = kInfiniteSparsity;  ///< g_cut / h_cut, or +inf when h_cut == 0.
  double g_cut = 0.0;                ///< normalized G mass crossing the cut
  double h_cut = 0.0;                ///< normalized H mass crossing the cut

  bool defined() const { return h_cut > 0.0; }
};

/// Normalized crossing mass (1/total) * sum_{u,v ordered} w(u,v) |1_S(u) - 1_S(v)|.
double cut_weight(const WeightedGraph& g, const Cut& s);

SparsityReport sparsity(const InstancePair& pair, const Cut& s);

/// Laplacian of the normalized graph with the ordered-pair convention:
/// x' L x = sum_{u,v ordered} w(u,v)/total * (x_u - x_v)^2.
Eigen::MatrixXd laplacian(const WeightedGraph& g);

/// mu with normalized H(u,v) = mu(u) mu(v); f with H(u,v) = f(u) f(v).
struct Rank1Measure {
  Eigen::VectorXd mu;
  Eigen::VectorXd f;
  double max_deviation = 0.0;  ///< max |H(u,v)/total - mu(u) mu(v)|
};

inline constexpr double kDefaultRank1Tol = 1e-9;

/// Returns nullopt when H is not rank-1 within `tol` (relative to the largest
/// normalized entry).
std::optional<Rank1Measure> rank1_decompose(const WeightedGraph& h,
                                            double tol = kDefaultRank1Tol);

struct CutValue {
  double value = 0.0;
  Cut cut;
};

inline constexpr int kExhaustiveLimit = 24;

/// Normalized Cheeger constant, exhaustive over all nontrivial cuts.
CutValue cheeger_constant(const WeightedGraph& g);

/// Conductance with vol(S) = sum of degrees, exhaustive over all nontrivial cuts.
CutValue conductance(const WeightedGraph& g);

}  // namespace sparsecut
