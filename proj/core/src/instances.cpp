#include "sparsecut/instances.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "sparsecut/errors.hpp"
#include "sparsecut/oracle.hpp"

namespace sparsecut {

using Eigen::MatrixXd;
using Eigen::VectorXd;

void MixParams::validate() const {
  if (!(eps > 0.0 && eps <= delta && delta <= 1.0))
    throw InputError("mixing parameters need 0 < eps <= delta <= 1 (eps = " +
                     std::to_string(eps) + ", delta = " + std::to_string(delta) + ")");
}

InstancePair mix_instance(const InstancePair& pair, const MixParams& p) {
  p.validate();
  const double r = p.eps / p.delta;
  const MatrixXd gbar = pair.g.weights() / pair.g.total();
  const MatrixXd hbar = pair.h.weights() / pair.h.total();
  MatrixXd mixed = (1.0 - r) * gbar + r * hbar;
  if (r == 1.0) mixed = hbar;
  return InstancePair(WeightedGraph(gbar), WeightedGraph(mixed));
}

UnmixReport unmix_cut_check(const InstancePair& pair, const MixParams& p, const Cut& cut,
                            double tol) {
  const InstancePair mixed = mix_instance(pair, p);
  UnmixReport rep;
  rep.threshold = p.eps / p.delta;
  rep.mixed_sigma = sparsity(mixed, cut).sigma;
  rep.original_sigma = sparsity(pair, cut).sigma;
  rep.antecedent = rep.mixed_sigma <= 0.5;
  rep.holds = !rep.antecedent || rep.original_sigma <= rep.threshold + tol;
  return rep;
}

std::pair<InstancePair, SdpGapReport> sdp_gap_mix(const InstancePair& pair, const MixParams& p,
                                                  const RelaxationOptions& options) {
  InstancePair mixed = mix_instance(pair, p);
  SdpGapReport rep;
  rep.params = p;
  rep.original_opt = brute_force_opt(pair).report.sigma;
  rep.original_sdp = solve_goemans_linial(pair, options).value;
  rep.mixed_opt = brute_force_opt(mixed).report.sigma;
  rep.mixed_sdp = solve_goemans_linial(mixed, options).value;
  return {std::move(mixed), rep};
}

double normalized_spectral_gap(const WeightedGraph& g) {
  const VectorXd deg = g.degrees();
  if (deg.minCoeff() <= 0.0) return 0.0;
  const VectorXd inv_sqrt = deg.cwiseSqrt().cwiseInverse();
  const MatrixXd a = inv_sqrt.asDiagonal() * g.weights() * inv_sqrt.asDiagonal();
  const MatrixXd l = MatrixXd::Identity(g.size(), g.size()) - a;
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(l, Eigen::EigenvaluesOnly);
  return eig.eigenvalues()[1];
}

namespace {

constexpr int kRegularAttempts = 100000;

bool connected(const MatrixXd& w) {
  const int n = static_cast<int>(w.rows());
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int v = 0; v < n; ++v)
      if (w(u, v) > 0.0 && !seen[v]) seen[v] = 1, ++count, stack.push_back(v);
  }
  return count == n;
}

// One configuration-model sample; empty when it has loops or parallel edges.
std::optional<MatrixXd> configuration_sample(int n, int d, std::mt19937_64& rng) {
  std::vector<int> stubs;
  stubs.reserve(static_cast<std::size_t>(n) * d);
  for (int v = 0; v < n; ++v)
    for (int j = 0; j < d; ++j) stubs.push_back(v);
  std::shuffle(stubs.begin(), stubs.end(), rng);
  MatrixXd w = MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
    const int u = stubs[i], v = stubs[i + 1];
    if (u == v || w(u, v) != 0.0) return std::nullopt;
    w(u, v) = w(v, u) = 1.0;
  }
  return w;
}

void add_edge(MatrixXd& w, int u, int v, double weight) {
  w(u, v) = weight;
  w(v, u) = weight;
}

}  // namespace

WeightedGraph random_regular_graph(int n, int d, std::uint64_t seed) {
  if (d < 3) throw InputError("degree must be at least 3");
  if (n <= d) throw InputError("need more vertices than the degree");
  if ((static_cast<long long>(n) * d) % 2 != 0)
    throw InputError("n * d must be even for a d-regular graph");
  std::mt19937_64 rng(seed);
  for (int attempt = 0; attempt < kRegularAttempts; ++attempt) {
    auto w = configuration_sample(n, d, rng);
    if (!w || !connected(*w)) continue;
    WeightedGraph g(std::move(*w));
    if (normalized_spectral_gap(g) >= kMinSpectralGap) return g;
  }
  throw SolverError("no certified " + std::to_string(d) + "-regular expander on " +
                    std::to_string(n) + " vertices within the resample budget");
}

Lollipop gen_lollipop(int k, std::uint64_t seed) {
  if (k < 2) throw InputError("lollipop needs k >= 2");
  const int n = 2 * k;
  MatrixXd g = MatrixXd::Zero(n, n);
  for (int j = 0; j < k; ++j) add_edge(g, j, j + 1, 1.0);
  if (k <= 8) {
    for (int a = k; a < n; ++a)
      for (int b = a + 1; b < n; ++b) add_edge(g, a, b, 1.0);
  } else {
    const WeightedGraph ex = random_regular_graph(k, k % 2 == 0 ? 3 : 4, seed);
    for (const Edge& e : ex.edges()) add_edge(g, k + e.u, k + e.v, 1.0);
  }
  MatrixXd h = MatrixXd::Zero(n, n);
  std::vector<int> support{0};
  for (int v = k; v < n; ++v) support.push_back(v);
  for (int a : support)
    for (int b : support) h(a, b) = 1.0;

  Lollipop out{InstancePair(WeightedGraph(std::move(g)), WeightedGraph(std::move(h))), k,
               VectorXd::Ones(n)};
  for (int j = 0; j <= k; ++j) out.witness[j] = static_cast<double>(j) / k;
  return out;
}

InstancePair gen_expander_clique(int n, int d, std::uint64_t seed) {
  WeightedGraph g = random_regular_graph(n, d, seed);
  return InstancePair(std::move(g), WeightedGraph(MatrixXd::Ones(n, n)));
}

InstancePair gen_random(const RandomSpec& spec) {
  const int n = spec.n;
  if (n < 2) throw InputError("random instance needs n >= 2");
  if (!(spec.density > 0.0 && spec.density <= 1.0))
    throw InputError("density must lie in (0, 1]");
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> weight(0.5, 2.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  // Spanning tree: each vertex of a random order attaches to an earlier one.
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  MatrixXd g = MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) {
    const int parent = order[std::uniform_int_distribution<int>(0, i - 1)(rng)];
    add_edge(g, order[i], parent, weight(rng));
  }
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) {
      const bool take = unit(rng) < spec.density;
      const double w = weight(rng);
      if (take && g(u, v) == 0.0) add_edge(g, u, v, w);
    }

  MatrixXd h = MatrixXd::Zero(n, n);
  if (spec.rank1) {
    VectorXd f(n);
    for (int v = 0; v < n; ++v) {
      const bool zero = unit(rng) < 0.25;
      const double value = 0.2 + 0.8 * unit(rng);
      f[v] = zero ? 0.0 : value;
    }
    // At least two vertices carry demand.
    for (int v = 0; (f.array() > 0.0).count() < 2; ++v)
      if (f[v] == 0.0) f[v] = 1.0;
    h = f * f.transpose();
  } else {
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v) {
        const bool take = unit(rng) < spec.density;
        const double w = weight(rng);
        if (take) add_edge(h, u, v, w);
      }
    if (h.maxCoeff() == 0.0) {
      const int u = std::uniform_int_distribution<int>(0, n - 1)(rng);
      const int v = (u + 1 + std::uniform_int_distribution<int>(0, n - 2)(rng)) % n;
      add_edge(h, u, v, weight(rng));
    }
  }
  return InstancePair(WeightedGraph(std::move(g)), WeightedGraph(std::move(h)));
}

}  // namespace sparsecut
