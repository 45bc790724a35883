#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include <Eigen/Dense>

#include "sparsecut/graph.hpp"
#include "sparsecut/relaxations.hpp"

namespace sparsecut {

/// Absolute slack on every certificate bound comparison.
inline constexpr double kCertTol = 1e-7;
/// Allowed |E_{mu x mu} d - 1| on entry to the dichotomy.
inline constexpr double kNormTol = 1e-9;

struct SweepResult {
  Cut cut;
  SparsityReport report;
};

/// Best threshold cut S_t = {v : x_v <= t} over the n-1 gaps between sorted
/// distinct values. Ties go to the smaller side, then lexicographic order.
/// Throws InputError when x is constant.
SweepResult sweep_cut(const Eigen::VectorXd& x, const InstancePair& pair);

/// Coordinates of f(v) are the rows of `coords`.
struct L1Embedding {
  Eigen::MatrixXd coords;

  int size() const { return static_cast<int>(coords.rows()); }
  int dim() const { return static_cast<int>(coords.cols()); }
  double distance(Vertex u, Vertex v) const {
    return (coords.row(u) - coords.row(v)).lpNorm<1>();
  }
};

/// (sum Gbar ||f(u)-f(v)||_1) / (sum Hbar ||f(u)-f(v)||_1); +inf on zero denominator.
double l1_ratio(const L1Embedding& f, const InstancePair& pair);

struct L1RoundResult {
  Cut cut;
  SparsityReport report;
  int coordinate = -1;
};

/// Sweeps every nonconstant coordinate and keeps the best cut.
L1RoundResult l1_round(const L1Embedding& f, const InstancePair& pair);

struct DichotomyOutcome {
  enum class Case { kBall, kSpread };

  Case which = Case::kSpread;
  /// Best ball: center with the largest mu(B(z, 1/4)), lowest index on ties.
  Vertex center = -1;
  std::vector<Vertex> ball;
  double ball_mass = 0.0;
  /// P_{u,v ~ mu}[d(u,v) >= 1/4]
  double far_pair_mass = 0.0;
  bool ball_holds = false;
  bool spread_holds = false;
};

/// Checks every vertex as a ball center. Ball is preferred when both hold.
/// Throws InputError when E_{mu x mu} d is not within kNormTol of 1.
DichotomyOutcome dichotomy_case(const SemiMetric& d, const Rank1Measure& mu);

enum class RoundingBranch { kFrechet, kCauchySchwarz };

std::string_view to_string(RoundingBranch branch);

struct RoundingCertificate {
  Cut cut;
  SparsityReport report;
  double epsilon = 0.0;  ///< relaxation value the bound is stated in
  RoundingBranch branch = RoundingBranch::kFrechet;
  double bound = 0.0;
  bool bound_holds = false;
  DichotomyOutcome evidence;
  int embedding_retries = 0;
  /// Set only by round_rank1_via_approx.
  std::optional<double> c1;
  std::optional<double> c2;
};

/// Sweep of g(v) = d(z, v); bound 8 eps. Requires the ball condition at z and
/// E_{mu x mu} d = 1.
RoundingCertificate frechet_round(const VectorEmbedding& emb, const Rank1Measure& mu, Vertex z,
                                  const InstancePair& pair);

struct EmbedOptions {
  double dimension_factor = 64.0;  ///< m = ceil(factor * ln n)
  int failures_before_doubling = 3;
  int max_doublings = 64;
};

struct L1EmbedResult {
  L1Embedding f;
  int retries = 0;  ///< rejected samples before the accepted one
};

/// Gaussian projection into l1 with ||f(x)-f(y)||_1 <= ||x-y|| <= 2 ||f(x)-f(y)||_1
/// verified on every pair; resamples until it holds.
L1EmbedResult l2_to_l1_embed(const VectorEmbedding& points, std::uint64_t seed,
                             const EmbedOptions& options = {});

/// Embeds the points themselves into l1 and sweeps coordinates; bound 8 sqrt(eps).
/// Requires the spread condition.
RoundingCertificate cs_round(const VectorEmbedding& emb, const Rank1Measure& mu,
                             const InstancePair& pair, std::uint64_t seed);

struct RoundOptions {
  RelaxationOptions relaxation;
  EmbedOptions embed;
};

/// Full pipeline for rank-1 H: SDP, dichotomy, then every branch whose
/// condition holds; the lower-sparsity cut is returned. Throws InputError if H
/// is not rank-1.
RoundingCertificate round_rank1(const InstancePair& pair, std::uint64_t seed,
                                const RoundOptions& options = {});

/// Same pipeline on (G, h_approx). c1, c2 are the extreme ratios
/// Hbar(S) / Hbar'(S) over all cuts; the bound is 8 (max(c2, 1) / c1) sqrt(eps').
RoundingCertificate round_rank1_via_approx(const InstancePair& pair,
                                           const WeightedGraph& h_approx,
                                           std::uint64_t seed, const RoundOptions& options = {});

}  // namespace sparsecut
