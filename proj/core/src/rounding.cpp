#include "sparsecut/rounding.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

#include "sparsecut/detail/cut_enumeration.hpp"
#include "sparsecut/errors.hpp"

namespace sparsecut {

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

// Running minimum of g_cut / h_cut with the sweep tie-break rules.
class BestCut {
 public:
  explicit BestCut(int n) : n_(n) {}

  // Returns true when the candidate replaced the incumbent.
  bool offer(double num, double den, const std::vector<char>& mask, int members) {
    if (!(den > 0.0)) {
      if (mask_.empty() && fallback_.empty()) fallback_ = mask;
      return false;
    }
    if (mask_.empty()) return take(num, den, mask, members);
    const double lhs = num * den_;
    const double rhs = num_ * den;
    const double slack = 1e-12 * std::max(std::abs(lhs), std::abs(rhs));
    if (lhs < rhs - slack) return take(num, den, mask, members);
    if (lhs > rhs + slack) return false;
    const int side = std::min(members, n_ - members);
    const int best_side = std::min(members_, n_ - members_);
    if (side != best_side) return side < best_side && take(num, den, mask, members);
    if (lexicographically_less(Cut::from_mask(mask), Cut::from_mask(mask_)))
      return take(num, den, mask, members);
    return false;
  }

  bool empty() const { return mask_.empty() && fallback_.empty(); }
  Cut cut() const { return Cut::from_mask(mask_.empty() ? fallback_ : mask_); }

 private:
  bool take(double num, double den, const std::vector<char>& mask, int members) {
    num_ = num, den_ = den, mask_ = mask, members_ = members;
    return true;
  }

  int n_;
  double num_ = 0.0;
  double den_ = 0.0;
  int members_ = 0;
  std::vector<char> mask_;
  std::vector<char> fallback_;
};

// Prefers a over b by sparsity, then smaller side, then lexicographic order.
bool prefer(const SparsityReport& ra, const Cut& a, const SparsityReport& rb, const Cut& b) {
  if (ra.defined() != rb.defined()) return ra.defined();
  if (ra.defined()) {
    const double lhs = ra.g_cut * rb.h_cut;
    const double rhs = rb.g_cut * ra.h_cut;
    const double slack = 1e-12 * std::max(std::abs(lhs), std::abs(rhs));
    if (lhs < rhs - slack) return true;
    if (lhs > rhs + slack) return false;
  }
  const int n = a.universe();
  const int sa = std::min(a.size(), n - a.size());
  const int sb = std::min(b.size(), n - b.size());
  if (sa != sb) return sa < sb;
  return lexicographically_less(a, b);
}

double pair_sum(const WeightedGraph& g, const SemiMetric& d) {
  double s = 0.0;
  for (const Edge& e : g.edges())
    if (e.u != e.v) s += 2.0 * e.w * d(e.u, e.v);
  return s / g.total();
}

double product_sum(const Rank1Measure& mu, const SemiMetric& d) {
  return mu.mu.dot(d.d * mu.mu);
}

void require_pair_size(const InstancePair& pair, int n, const char* what) {
  if (pair.size() != n) throw InputError(std::string(what) + " size does not match instance");
}

}  // namespace

SweepResult sweep_cut(const VectorXd& x, const InstancePair& pair) {
  const int n = pair.size();
  if (x.size() != n) throw InputError("sweep vector has wrong length");
  if (!x.allFinite()) throw InputError("sweep vector is not finite");
  if (x.maxCoeff() == x.minCoeff()) throw InputError("sweep vector is constant");

  std::vector<Vertex> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Vertex a, Vertex b) { return x[a] < x[b]; });

  detail::CrossingTracker g_cross(pair.g);
  detail::CrossingTracker h_cross(pair.h);
  std::vector<char> mask(static_cast<std::size_t>(n), 0);
  g_cross.reset(mask);
  h_cross.reset(mask);
  BestCut best(n);
  int members = 0;
  for (int i = 0; i < n - 1; ++i) {
    const Vertex v = order[i];
    mask[v] = 1;
    ++members;
    g_cross.flipped(v, mask);
    h_cross.flipped(v, mask);
    if (x[order[i + 1]] == x[v]) continue;
    best.offer(2.0 * g_cross.crossing() / pair.g.total(),
               2.0 * h_cross.crossing() / pair.h.total(), mask, members);
  }
  SweepResult out;
  out.cut = best.cut();
  out.report = sparsity(pair, out.cut);
  return out;
}

double l1_ratio(const L1Embedding& f, const InstancePair& pair) {
  require_pair_size(pair, f.size(), "embedding");
  double num = 0.0, den = 0.0;
  for (const Edge& e : pair.g.edges())
    if (e.u != e.v) num += 2.0 * e.w * f.distance(e.u, e.v);
  for (const Edge& e : pair.h.edges())
    if (e.u != e.v) den += 2.0 * e.w * f.distance(e.u, e.v);
  num /= pair.g.total();
  den /= pair.h.total();
  return den > 0.0 ? num / den : kInfiniteSparsity;
}

L1RoundResult l1_round(const L1Embedding& f, const InstancePair& pair) {
  require_pair_size(pair, f.size(), "embedding");
  L1RoundResult best;
  for (int c = 0; c < f.dim(); ++c) {
    const VectorXd col = f.coords.col(c);
    if (col.maxCoeff() == col.minCoeff()) continue;
    SweepResult s = sweep_cut(col, pair);
    if (best.coordinate < 0 || prefer(s.report, s.cut, best.report, best.cut)) {
      best.cut = std::move(s.cut);
      best.report = s.report;
      best.coordinate = c;
    }
  }
  if (best.coordinate < 0) throw InputError("l1 embedding is constant in every coordinate");
  return best;
}

DichotomyOutcome dichotomy_case(const SemiMetric& d, const Rank1Measure& mu) {
  const int n = d.size();
  if (mu.mu.size() != n) throw InputError("measure and metric sizes differ");
  const double expectation = product_sum(mu, d);
  if (!(std::abs(expectation - 1.0) <= kNormTol))
    throw InputError("dichotomy requires E[d] = 1 under mu x mu (got " +
                     std::to_string(expectation) + ")");

  DichotomyOutcome out;
  for (Vertex z = 0; z < n; ++z) {
    double mass = 0.0;
    for (Vertex v = 0; v < n; ++v)
      if (d(z, v) <= 0.25) mass += mu.mu[v];
    if (out.center < 0 || mass > out.ball_mass) out.center = z, out.ball_mass = mass;
  }
  for (Vertex v = 0; v < n; ++v)
    if (d(out.center, v) <= 0.25) out.ball.push_back(v);
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = 0; v < n; ++v)
      if (d(u, v) >= 0.25) out.far_pair_mass += mu.mu[u] * mu.mu[v];
  out.ball_holds = out.ball_mass >= 0.5;
  out.spread_holds = out.far_pair_mass >= 0.5;
  if (!out.ball_holds && !out.spread_holds)
    throw SolverError("neither dichotomy condition holds (ball mass " +
                      std::to_string(out.ball_mass) + ", far-pair mass " +
                      std::to_string(out.far_pair_mass) + ")");
  out.which = out.ball_holds ? DichotomyOutcome::Case::kBall : DichotomyOutcome::Case::kSpread;
  return out;
}

std::string_view to_string(RoundingBranch branch) {
  return branch == RoundingBranch::kFrechet ? "frechet" : "cauchy-schwarz";
}

RoundingCertificate frechet_round(const VectorEmbedding& emb, const Rank1Measure& mu, Vertex z,
                                  const InstancePair& pair) {
  require_pair_size(pair, emb.size(), "embedding");
  if (z < 0 || z >= emb.size()) throw InputError("ball center out of range");
  const SemiMetric d = emb.squared_distances();
  const double expectation = product_sum(mu, d);
  if (!(std::abs(expectation - 1.0) <= kNormTol))
    throw InputError("Frechet rounding requires E[d] = 1 under mu x mu");
  double mass = 0.0;
  for (Vertex v = 0; v < d.size(); ++v)
    if (d(z, v) <= 0.25) mass += mu.mu[v];
  if (!(mass >= 0.5)) throw InputError("ball condition fails at the given center");

  RoundingCertificate cert;
  cert.branch = RoundingBranch::kFrechet;
  cert.epsilon = pair_sum(pair.g, d);
  cert.bound = 8.0 * cert.epsilon;
  const VectorXd g = d.d.row(z).transpose();
  if (g.maxCoeff() == g.minCoeff()) throw InputError("Frechet map is constant");
  SweepResult s = sweep_cut(g, pair);
  cert.cut = std::move(s.cut);
  cert.report = s.report;
  cert.bound_holds = cert.report.sigma <= cert.bound + kCertTol;
  cert.evidence.which = DichotomyOutcome::Case::kBall;
  cert.evidence.center = z;
  cert.evidence.ball_mass = mass;
  cert.evidence.ball_holds = true;
  for (Vertex v = 0; v < d.size(); ++v)
    if (d(z, v) <= 0.25) cert.evidence.ball.push_back(v);
  return cert;
}

L1EmbedResult l2_to_l1_embed(const VectorEmbedding& points, std::uint64_t seed,
                             const EmbedOptions& options) {
  const int n = points.size();
  if (n < 2) throw InputError("embedding needs at least 2 points");
  if (!points.points.allFinite()) throw InputError("points are not finite");
  const int dim = points.dim();

  std::vector<double> l2;
  l2.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) l2.push_back((points.points.row(u) - points.points.row(v)).norm());

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  long long m = static_cast<long long>(std::ceil(options.dimension_factor * std::log(n)));
  m = std::max(m, 1LL);
  L1EmbedResult out;
  int doublings = 0;
  int consecutive = 0;
  for (;;) {
    MatrixXd proj(dim, m);
    for (long long j = 0; j < m; ++j)
      for (int r = 0; r < dim; ++r) proj(r, j) = normal(rng);
    const double scale = std::sqrt(std::numbers::pi / 2.0) * 0.75 / static_cast<double>(m);
    MatrixXd coords = points.points * proj * scale;

    bool ok = true;
    std::size_t p = 0;
    for (int u = 0; u < n && ok; ++u)
      for (int v = u + 1; v < n; ++v, ++p) {
        const double l1 = (coords.row(u) - coords.row(v)).lpNorm<1>();
        if (!(l1 <= l2[p] && l2[p] <= 2.0 * l1)) {
          ok = false;
          break;
        }
      }
    if (ok) {
      out.f.coords = std::move(coords);
      return out;
    }
    ++out.retries;
    if (++consecutive >= options.failures_before_doubling) {
      consecutive = 0;
      if (++doublings > options.max_doublings)
        throw SolverError("l1 embedding budget exhausted after " + std::to_string(out.retries) +
                          " samples");
      m *= 2;
    }
  }
}

RoundingCertificate cs_round(const VectorEmbedding& emb, const Rank1Measure& mu,
                             const InstancePair& pair, std::uint64_t seed) {
  require_pair_size(pair, emb.size(), "embedding");
  const SemiMetric d = emb.squared_distances();
  const double expectation = product_sum(mu, d);
  if (!(std::abs(expectation - 1.0) <= kNormTol))
    throw InputError("Cauchy-Schwarz rounding requires E[d] = 1 under mu x mu");
  double far = 0.0;
  for (Vertex u = 0; u < d.size(); ++u)
    for (Vertex v = 0; v < d.size(); ++v)
      if (d(u, v) >= 0.25) far += mu.mu[u] * mu.mu[v];
  if (!(far >= 0.5)) throw InputError("spread condition fails");

  RoundingCertificate cert;
  cert.branch = RoundingBranch::kCauchySchwarz;
  cert.epsilon = pair_sum(pair.g, d);
  cert.bound = 8.0 * std::sqrt(cert.epsilon);
  const L1EmbedResult f = l2_to_l1_embed(emb, seed);
  L1RoundResult r = l1_round(f.f, pair);
  cert.cut = std::move(r.cut);
  cert.report = r.report;
  cert.bound_holds = cert.report.sigma <= cert.bound + kCertTol;
  cert.embedding_retries = f.retries;
  cert.evidence.which = DichotomyOutcome::Case::kSpread;
  cert.evidence.far_pair_mass = far;
  cert.evidence.spread_holds = true;
  return cert;
}

RoundingCertificate round_rank1(const InstancePair& pair, std::uint64_t seed,
                                const RoundOptions& options) {
  const auto mu = rank1_decompose(pair.h);
  if (!mu) throw InputError("demand graph is not rank-1");
  RelaxationValue rv = solve_goemans_linial(pair, options.relaxation);

  // Pin E_{mu x mu} d to exactly 1; the solver normalizes against Hbar, which
  // agrees with mu x mu only up to the rank-1 tolerance.
  VectorEmbedding emb = rv.embedding;
  const double expectation = product_sum(*mu, emb.squared_distances());
  if (!(expectation > 0.0)) throw SolverError("embedding carries no demand mass");
  emb.points /= std::sqrt(expectation);
  const SemiMetric d = emb.squared_distances();

  DichotomyOutcome outcome = dichotomy_case(d, *mu);
  std::optional<RoundingCertificate> best;
  double bound = kInfiniteSparsity;
  if (outcome.ball_holds) {
    best = frechet_round(emb, *mu, outcome.center, pair);
    bound = best->bound;
  }
  if (outcome.spread_holds) {
    RoundingCertificate cs = cs_round(emb, *mu, pair, seed);
    bound = std::min(bound, cs.bound);
    if (!best || prefer(cs.report, cs.cut, best->report, best->cut)) {
      const int retries = cs.embedding_retries;
      best = std::move(cs);
      best->embedding_retries = retries;
    }
  }
  best->evidence = outcome;
  best->bound = bound;
  best->bound_holds = best->report.sigma <= bound + kCertTol;
  return *best;
}

RoundingCertificate round_rank1_via_approx(const InstancePair& pair,
                                           const WeightedGraph& h_approx, std::uint64_t seed,
                                           const RoundOptions& options) {
  const int n = pair.size();
  if (h_approx.size() != n) throw InputError("approximating demand graph has wrong size");
  if (n > kExhaustiveLimit)
    throw InputError("instance too large for cut enumeration (n = " + std::to_string(n) +
                     " > " + std::to_string(kExhaustiveLimit) + ")");

  detail::CrossingTracker h_cross(pair.h);
  detail::CrossingTracker a_cross(h_approx);
  double c1 = kInfiniteSparsity;
  double c2 = 0.0;
  bool infinite = false;
  detail::for_each_cut(n, [&](const std::vector<char>& in_cut, Vertex v, bool proper) {
    if (v < 0) {
      h_cross.reset(in_cut);
      a_cross.reset(in_cut);
    } else {
      h_cross.flipped(v, in_cut);
      a_cross.flipped(v, in_cut);
    }
    if (!proper) return;
    const double h = 2.0 * h_cross.crossing() / pair.h.total();
    const double a = 2.0 * a_cross.crossing() / h_approx.total();
    if (a <= 1e-14) {
      if (h > 1e-14) infinite = true;
      return;
    }
    c1 = std::min(c1, h / a);
    c2 = std::max(c2, h / a);
  });
  if (infinite) throw InputError("a cut separates demand but no approximating demand");
  if (!(c1 > 0.0) || !std::isfinite(c1))
    throw InputError("approximation is not bounded below on every cut (c1 = 0)");

  const InstancePair approx(pair.g, h_approx);
  RoundingCertificate cert = round_rank1(approx, seed, options);
  cert.report = sparsity(pair, cert.cut);
  cert.bound = 8.0 * (std::max(c2, 1.0) / c1) * std::sqrt(cert.epsilon);
  cert.bound_holds = cert.report.sigma <= cert.bound + kCertTol;
  cert.c1 = c1;
  cert.c2 = c2;
  return cert;
}

}  // namespace sparsecut
