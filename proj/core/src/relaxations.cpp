#include "sparsecut/relaxations.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <tuple>

#include "sparsecut/detail/sdp_ipm.hpp"
#include "sparsecut/detail/simplex.hpp"
#include "sparsecut/errors.hpp"

namespace sparsecut {

using Eigen::MatrixXd;
using Eigen::VectorXd;

double SemiMetric::max_triangle_violation() const {
  const int n = size();
  double worst = 0.0;
  for (int u = 0; u < n; ++u)
    for (int w = u + 1; w < n; ++w)
      for (int v = 0; v < n; ++v)
        if (v != u && v != w) worst = std::max(worst, d(u, w) - d(u, v) - d(v, w));
  return worst;
}

SemiMetric VectorEmbedding::squared_distances() const {
  const int n = size();
  SemiMetric m{MatrixXd::Zero(n, n)};
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      m.d(u, v) = m.d(v, u) = (points.row(u) - points.row(v)).squaredNorm();
  return m;
}

std::string_view to_string(RelaxationKind kind) {
  switch (kind) {
    case RelaxationKind::kSpectral: return "spectral";
    case RelaxationKind::kLeightonRao: return "lr";
    case RelaxationKind::kGoemansLinial: return "sdp";
  }
  return "unknown";
}

RelaxationKind parse_relaxation_kind(std::string_view name) {
  if (name == "spectral") return RelaxationKind::kSpectral;
  if (name == "lr") return RelaxationKind::kLeightonRao;
  if (name == "sdp") return RelaxationKind::kGoemansLinial;
  throw InputError("unknown relaxation kind '" + std::string(name) + "'");
}

namespace {

// sum_{u,v ordered} wbar(u,v) d(u,v)
double pair_sum(const WeightedGraph& g, const MatrixXd& d) {
  double s = 0.0;
  for (const Edge& e : g.edges())
    if (e.u != e.v) s += 2.0 * e.w * d(e.u, e.v);
  return s / g.total();
}

double offdiagonal_mass(const WeightedGraph& h) {
  double s = 0.0;
  for (const Edge& e : h.edges())
    if (e.u != e.v) s += 2.0 * e.w;
  return s / h.total();
}

void require_demand(const InstancePair& pair) {
  if (pair.size() < 2) throw InputError("need at least 2 vertices");
  if (!(offdiagonal_mass(pair.h) > 0.0))
    throw InputError("demand graph has no off-diagonal mass");
}

// Symmetric eigendecomposition split into range (eigenvalue above a relative
// threshold) and kernel.
struct RangeSplit {
  MatrixXd range;
  VectorXd range_values;
  MatrixXd kernel;
};

// `scale` bounds the magnitude of the matrix the block was taken from, so that
// a block of pure rounding noise is recognized as zero.
RangeSplit split_range(const MatrixXd& a, double scale = 0.0) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(a);
  const VectorXd& vals = eig.eigenvalues();
  const double cutoff = 1e-10 * std::max({vals.cwiseAbs().maxCoeff(), scale, 1e-300});
  std::vector<int> range_idx, kernel_idx;
  for (Eigen::Index i = 0; i < vals.size(); ++i)
    (vals[i] > cutoff ? range_idx : kernel_idx).push_back(static_cast<int>(i));
  RangeSplit s;
  s.range.resize(a.rows(), static_cast<Eigen::Index>(range_idx.size()));
  s.range_values.resize(static_cast<Eigen::Index>(range_idx.size()));
  s.kernel.resize(a.rows(), static_cast<Eigen::Index>(kernel_idx.size()));
  for (std::size_t j = 0; j < range_idx.size(); ++j) {
    s.range.col(static_cast<Eigen::Index>(j)) = eig.eigenvectors().col(range_idx[j]);
    s.range_values[static_cast<Eigen::Index>(j)] = vals[range_idx[j]];
  }
  for (std::size_t j = 0; j < kernel_idx.size(); ++j)
    s.kernel.col(static_cast<Eigen::Index>(j)) = eig.eigenvectors().col(kernel_idx[j]);
  return s;
}

MatrixXd pseudo_inverse(const MatrixXd& a, double scale) {
  if (a.size() == 0) return a;
  const RangeSplit s = split_range(a, scale);
  return s.range * s.range_values.cwiseInverse().asDiagonal() * s.range.transpose();
}

int cuts_per_round(const RelaxationOptions& options, int n) {
  return options.cuts_per_round > 0 ? options.cuts_per_round : 4 * n;
}

struct Triangle {
  int u, v, w;  // d(u,w) <= d(u,v) + d(v,w), u < w
  double violation;
};

// For every pair (u, w), its most violated triangle through some v.
std::vector<Triangle> violated_triangles(const MatrixXd& d, double tol) {
  const int n = static_cast<int>(d.rows());
  std::vector<Triangle> out;
  for (int u = 0; u < n; ++u) {
    for (int w = u + 1; w < n; ++w) {
      Triangle best{u, -1, w, tol};
      for (int v = 0; v < n; ++v) {
        if (v == u || v == w) continue;
        const double viol = d(u, w) - d(u, v) - d(v, w);
        if (viol > best.violation) best.v = v, best.violation = viol;
      }
      if (best.v >= 0) out.push_back(best);
    }
  }
  std::sort(out.begin(), out.end(), [](const Triangle& a, const Triangle& b) {
    if (a.violation != b.violation) return a.violation > b.violation;
    return std::tie(a.u, a.w, a.v) < std::tie(b.u, b.w, b.v);
  });
  return out;
}

}  // namespace

RelaxationValue solve_spectral(const InstancePair& pair) {
  const MatrixXd lg = laplacian(pair.g);
  const MatrixXd lh = laplacian(pair.h);
  if (lh.cwiseAbs().maxCoeff() == 0.0)
    throw InputError("degenerate pencil: demand Laplacian vanishes");

  // Split along range(L_H) + ker(L_H); minimizing over the kernel component
  // leaves the Schur complement of L_G on the range.
  const RangeSplit h = split_range(lh);
  const MatrixXd& U = h.range;
  const MatrixXd& K = h.kernel;
  const MatrixXd A = U.transpose() * lg * U;
  MatrixXd schur = A;
  MatrixXd elim;  // kernel coefficients as a linear map of range coefficients
  if (K.cols() > 0) {
    const MatrixXd B = U.transpose() * lg * K;
    const MatrixXd Dp = pseudo_inverse(K.transpose() * lg * K, lg.cwiseAbs().maxCoeff());
    elim = -Dp * B.transpose();
    schur = A + B * elim;
  }
  const VectorXd inv_sqrt = h.range_values.cwiseSqrt().cwiseInverse();
  const MatrixXd reduced = inv_sqrt.asDiagonal() * (0.5 * (schur + schur.transpose())) *
                           inv_sqrt.asDiagonal();
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(reduced);
  const VectorXd r = inv_sqrt.cwiseProduct(eig.eigenvectors().col(0));
  VectorXd x = U * r;
  if (K.cols() > 0) x += K * (elim * r);
  x /= std::sqrt(x.dot(lh * x));

  RelaxationValue rv;
  rv.kind = RelaxationKind::kSpectral;
  rv.value = std::max(eig.eigenvalues()[0], 0.0);
  rv.x = std::move(x);
  return rv;
}

RelaxationValue solve_leighton_rao(const InstancePair& pair, const RelaxationOptions& options) {
  require_demand(pair);
  const int n = pair.size();
  // One row per unordered pair p = {u, v}; the LP solved is the dual
  //   max lambda  s.t.  lambda a_p + sum_t y_t T_t(p) <= c_p,  y >= 0,
  // whose multipliers recover the metric d = -pi.
  MatrixXd index = MatrixXd::Constant(n, n, -1);
  int rows = 0;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) index(u, v) = index(v, u) = rows++;
  VectorXd c(rows), a(rows);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) {
      const int p = static_cast<int>(index(u, v));
      c[p] = 2.0 * pair.g.normalized(u, v);
      a[p] = 2.0 * pair.h.normalized(u, v);
    }

  detail::RevisedSimplex lp(c, VectorXd::Zero(rows));
  detail::SparseColumn lambda;
  for (int p = 0; p < rows; ++p)
    if (a[p] > 0.0) lambda.rows.push_back(p), lambda.values.push_back(a[p]);
  lp.add_column(std::move(lambda), -1.0);

  RelaxationValue rv;
  rv.kind = RelaxationKind::kLeightonRao;
  std::set<std::tuple<int, int, int>> present;
  MatrixXd d = MatrixXd::Zero(n, n);
  const int per_round = cuts_per_round(options, n);
  for (int round = 0;; ++round) {
    if (round >= options.max_rounds)
      throw SolverError("Leighton-Rao cutting planes did not converge after " +
                        std::to_string(round) + " rounds (current value " +
                        std::to_string(-lp.objective()) + ")");
    const auto status = lp.solve();
    if (status != detail::RevisedSimplex::Status::kOptimal)
      throw SolverError("Leighton-Rao LP solve failed (best dual value " +
                        std::to_string(-lp.objective()) + ")");
    const VectorXd& pi = lp.multipliers();
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        d(u, v) = d(v, u) = std::max(-pi[static_cast<Eigen::Index>(index(u, v))], 0.0);
    rv.diagnostics.rounds = round + 1;

    const auto violated = violated_triangles(d, options.metric_tol);
    if (violated.empty()) break;
    int added = 0;
    for (const Triangle& t : violated) {
      if (added >= per_round) break;
      if (!present.insert({t.u, t.v, t.w}).second) continue;
      detail::SparseColumn col;
      col.rows = {static_cast<int>(index(t.u, t.w)), static_cast<int>(index(t.u, t.v)),
                  static_cast<int>(index(t.v, t.w))};
      col.values = {-1.0, 1.0, 1.0};
      lp.add_column(std::move(col), 0.0);
      ++added;
    }
    if (added == 0)
      throw SolverError("Leighton-Rao separation repeated an existing constraint");
  }

  const double norm = pair_sum(pair.h, d);
  if (!(norm > 0.0)) throw SolverError("Leighton-Rao metric has zero demand mass");
  d /= norm;
  rv.metric.d = std::move(d);
  rv.value = pair_sum(pair.g, rv.metric.d);
  rv.diagnostics.cuts = static_cast<int>(present.size());
  rv.diagnostics.iterations = lp.iterations();
  rv.diagnostics.max_triangle_violation = rv.metric.max_triangle_violation();
  rv.diagnostics.normalization_residual = std::abs(pair_sum(pair.h, rv.metric.d) - 1.0);
  return rv;
}

namespace {

// Goemans-Linial program on one connected component of G + H. Vertex 0 of the
// component is pinned at the origin, so the PSD variable is the Gram matrix of
// the remaining k = n - 1 points. Returns the full n x n Gram matrix.
struct GramSolve {
  MatrixXd gram;
  int rounds = 0;
  int cuts = 0;
  int iterations = 0;
  double gap = 0.0;
};

void add_distance(std::map<std::pair<int, int>, double>& acc, int a, int b, double s) {
  // d(a, b) in pinned coordinates (vertex 0 removed, indices shifted by one).
  if (a > 0) acc[{a - 1, a - 1}] += s;
  if (b > 0) acc[{b - 1, b - 1}] += s;
  if (a > 0 && b > 0) acc[{std::min(a, b) - 1, std::max(a, b) - 1}] -= s;
}

std::vector<detail::SymEntry> to_entries(const std::map<std::pair<int, int>, double>& acc) {
  std::vector<detail::SymEntry> out;
  for (const auto& [rc, v] : acc)
    if (v != 0.0) out.push_back({rc.first, rc.second, v});
  return out;
}

GramSolve solve_gram(const MatrixXd& lg, const MatrixXd& lh, const RelaxationOptions& options) {
  const int n = static_cast<int>(lg.rows());
  const int k = n - 1;
  detail::SdpProblem base;
  base.dim = k;
  base.cost = lg.bottomRightCorner(k, k);
  detail::SdpConstraint normalization;
  for (int r = 0; r < k; ++r)
    for (int c = r; c < k; ++c)
      if (lh(r + 1, c + 1) != 0.0) normalization.entries.push_back({r, c, lh(r + 1, c + 1)});
  normalization.rhs = 1.0;
  base.constraints.push_back(std::move(normalization));

  detail::SdpOptions sdp_options;
  sdp_options.fallback_tol = options.solver_tol;

  std::vector<Triangle> cuts;
  std::set<std::tuple<int, int, int>> present;
  GramSolve out;
  const int per_round = cuts_per_round(options, n);
  for (int round = 0;; ++round) {
    if (round >= options.max_rounds)
      throw SolverError("Goemans-Linial cutting planes did not converge after " +
                        std::to_string(round) + " rounds");
    detail::SdpProblem problem = base;
    problem.lin_cost = VectorXd::Zero(static_cast<Eigen::Index>(cuts.size()));
    for (std::size_t j = 0; j < cuts.size(); ++j) {
      std::map<std::pair<int, int>, double> acc;
      add_distance(acc, cuts[j].u, cuts[j].v, 1.0);
      add_distance(acc, cuts[j].v, cuts[j].w, 1.0);
      add_distance(acc, cuts[j].u, cuts[j].w, -1.0);
      detail::SdpConstraint c;
      c.entries = to_entries(acc);
      c.lin_index = static_cast<int>(j);
      c.lin_coef = -1.0;
      problem.constraints.push_back(std::move(c));
    }
    const detail::SdpResult res = detail::solve_sdp(problem, sdp_options);
    out.iterations += res.iterations;
    out.gap = res.relative_gap;
    out.rounds = round + 1;

    out.gram = MatrixXd::Zero(n, n);
    out.gram.bottomRightCorner(k, k) = res.X;
    MatrixXd d(n, n);
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v)
        d(u, v) = out.gram(u, u) + out.gram(v, v) - 2.0 * out.gram(u, v);
    // Compare violations at unit normalization so metric_tol is scale free.
    const double norm = (lh.cwiseProduct(out.gram)).sum();
    if (norm > 0.0) d /= norm;
    const auto violated = violated_triangles(d, options.metric_tol);
    if (violated.empty()) break;
    int added = 0;
    for (const Triangle& t : violated) {
      if (added >= per_round) break;
      if (!present.insert({t.u, t.v, t.w}).second) continue;
      cuts.push_back(t);
      ++added;
    }
    if (added == 0) throw SolverError("Goemans-Linial separation repeated an existing constraint");
  }
  out.cuts = static_cast<int>(cuts.size());
  return out;
}

// Connected components of G + H, ignoring self-loops.
std::vector<std::vector<int>> components(const InstancePair& pair) {
  const int n = pair.size();
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (const auto* g : {&pair.g, &pair.h})
    for (const Edge& e : g->edges())
      if (e.u != e.v) parent[find(e.u)] = find(e.v);
  std::vector<std::vector<int>> comps;
  std::vector<int> slot(static_cast<std::size_t>(n), -1);
  for (int v = 0; v < n; ++v) {
    const int r = find(v);
    if (slot[r] < 0) slot[r] = static_cast<int>(comps.size()), comps.emplace_back();
    comps[slot[r]].push_back(v);
  }
  return comps;
}

}  // namespace

RelaxationValue solve_goemans_linial(const InstancePair& pair, const RelaxationOptions& options) {
  require_demand(pair);
  const int n = pair.size();
  const MatrixXd lg = laplacian(pair.g);
  const MatrixXd lh = laplacian(pair.h);

  // On a disconnected G + H the optimum concentrates on the component with the
  // best ratio; the others collapse onto one of its points, which keeps every
  // triangle inequality intact.
  RelaxationValue rv;
  rv.kind = RelaxationKind::kGoemansLinial;
  double best_ratio = std::numeric_limits<double>::infinity();
  MatrixXd best_gram;
  std::vector<int> best_comp;
  for (const auto& comp : components(pair)) {
    if (comp.size() < 2) continue;
    const int m = static_cast<int>(comp.size());
    MatrixXd sub_g(m, m), sub_h(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        sub_g(i, j) = lg(comp[i], comp[j]);
        sub_h(i, j) = lh(comp[i], comp[j]);
      }
    if (sub_h.cwiseAbs().maxCoeff() == 0.0) continue;
    const GramSolve gs = solve_gram(sub_g, sub_h, options);
    rv.diagnostics.rounds += gs.rounds;
    rv.diagnostics.cuts += gs.cuts;
    rv.diagnostics.iterations += gs.iterations;
    rv.diagnostics.duality_gap = std::max(rv.diagnostics.duality_gap, gs.gap);
    const double ratio = sub_g.cwiseProduct(gs.gram).sum() / sub_h.cwiseProduct(gs.gram).sum();
    if (ratio < best_ratio) best_ratio = ratio, best_gram = gs.gram, best_comp = comp;
  }
  if (best_comp.empty()) throw SolverError("no component carries demand");

  // Points from the Gram matrix; small negative eigenvalues are rounding.
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(best_gram);
  const VectorXd& vals = eig.eigenvalues();
  if (vals.minCoeff() < -1e-9 * std::max(1.0, vals.maxCoeff()))
    throw SolverError("Gram matrix is not positive semidefinite (eigenvalue " +
                      std::to_string(vals.minCoeff()) + ")");
  const double rank_cutoff = 1e-12 * std::max(vals.maxCoeff(), 1e-300);
  std::vector<int> keep;
  for (Eigen::Index i = vals.size() - 1; i >= 0; --i)
    if (vals[i] > rank_cutoff) keep.push_back(static_cast<int>(i));
  if (keep.empty()) throw SolverError("Goemans-Linial solution collapsed to a point");
  const int m = static_cast<int>(best_comp.size());
  MatrixXd local(m, static_cast<Eigen::Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j)
    local.col(static_cast<Eigen::Index>(j)) =
        eig.eigenvectors().col(keep[j]) * std::sqrt(vals[keep[j]]);

  MatrixXd points = MatrixXd::Zero(n, local.cols());
  for (int v = 0; v < n; ++v) points.row(v) = local.row(0);
  for (int i = 0; i < m; ++i) points.row(best_comp[i]) = local.row(i);

  rv.embedding.points = std::move(points);
  SemiMetric d = rv.embedding.squared_distances();
  const double norm = pair_sum(pair.h, d.d);
  if (!(norm > 0.0)) throw SolverError("Goemans-Linial embedding has zero demand mass");
  rv.embedding.points /= std::sqrt(norm);
  d.d /= norm;
  rv.value = pair_sum(pair.g, d.d);
  rv.diagnostics.max_triangle_violation = d.max_triangle_violation();
  rv.diagnostics.normalization_residual = std::abs(pair_sum(pair.h, d.d) - 1.0);
  return rv;
}

RelaxationValue solve_relaxation(const InstancePair& pair, RelaxationKind kind,
                                 const RelaxationOptions& options) {
  switch (kind) {
    case RelaxationKind::kSpectral: return solve_spectral(pair);
    case RelaxationKind::kLeightonRao: return solve_leighton_rao(pair, options);
    case RelaxationKind::kGoemansLinial: return solve_goemans_linial(pair, options);
  }
  throw InputError("unknown relaxation kind");
}

ResidualReport verify_solution(const InstancePair& pair, const RelaxationValue& rv,
                               double solver_tol) {
  ResidualReport rep;
  const int n = pair.size();
  auto note = [&](double residual, std::string name) {
    if (residual > rep.max_residual) {
      rep.max_residual = residual;
      rep.worst_constraint = std::move(name);
    }
  };

  if (rv.kind == RelaxationKind::kSpectral) {
    if (rv.x.size() != n) throw InputError("spectral witness has wrong length");
    const MatrixXd lg = laplacian(pair.g);
    const MatrixXd lh = laplacian(pair.h);
    const double den = rv.x.dot(lh * rv.x);
    if (!(den > 0.0)) {
      rep.normalization_residual = 1.0;
      note(1.0, "denominator");
    } else {
      rep.objective = rv.x.dot(lg * rv.x) / den;
      rep.objective_residual = std::abs(rep.objective - rv.value);
      note(rep.objective_residual, "objective");
    }
  } else {
    MatrixXd d;
    if (rv.kind == RelaxationKind::kLeightonRao) {
      d = rv.metric.d;
    } else {
      if (rv.embedding.size() != n) throw InputError("embedding has wrong number of points");
      d = rv.embedding.squared_distances().d;
    }
    if (d.rows() != n || d.cols() != n) throw InputError("metric has wrong size");
    for (int u = 0; u < n; ++u) {
      note(std::abs(d(u, u)), "diagonal(" + std::to_string(u) + ")");
      rep.structure_residual = std::max(rep.structure_residual, std::abs(d(u, u)));
      for (int v = u + 1; v < n; ++v) {
        const double asym = std::abs(d(u, v) - d(v, u));
        const double neg = std::max(-d(u, v), 0.0);
        rep.structure_residual = std::max({rep.structure_residual, asym, neg});
        note(asym, "symmetry(" + std::to_string(u) + "," + std::to_string(v) + ")");
        note(neg, "nonnegativity(" + std::to_string(u) + "," + std::to_string(v) + ")");
      }
    }
    for (int u = 0; u < n; ++u)
      for (int w = u + 1; w < n; ++w)
        for (int v = 0; v < n; ++v) {
          if (v == u || v == w) continue;
          const double viol = d(u, w) - d(u, v) - d(v, w);
          if (viol > rep.max_triangle_violation) rep.max_triangle_violation = viol;
          note(viol, "triangle(" + std::to_string(u) + "," + std::to_string(v) + "," +
                         std::to_string(w) + ")");
        }
    rep.objective = pair_sum(pair.g, d);
    rep.objective_residual = std::abs(rep.objective - rv.value);
    note(rep.objective_residual, "objective");
    rep.normalization_residual = std::abs(pair_sum(pair.h, d) - 1.0);
    note(rep.normalization_residual, "normalization");
  }
  rep.pass = rep.max_residual <= 10.0 * solver_tol;
  if (rep.max_residual <= 0.0) rep.worst_constraint.clear();
  return rep;
}

}  // namespace sparsecut
