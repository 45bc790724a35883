#include "sparsecut/stcut.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>

#include "sparsecut/errors.hpp"
#include "sparsecut/rounding.hpp"

namespace sparsecut {

using Eigen::VectorXd;

namespace {

// Maximum-principle slack for rounding in the linear solve.
constexpr double kRangeTol = 1e-12;

std::vector<int> component_of(const WeightedGraph& g, Vertex root) {
  const int n = g.size();
  std::vector<std::vector<Vertex>> adj(static_cast<std::size_t>(n));
  for (const Edge& e : g.edges())
    if (e.u != e.v) adj[e.u].push_back(e.v), adj[e.v].push_back(e.u);
  std::vector<int> seen(static_cast<std::size_t>(n), 0);
  std::vector<Vertex> stack{root};
  seen[root] = 1;
  while (!stack.empty()) {
    const Vertex u = stack.back();
    stack.pop_back();
    for (Vertex v : adj[u])
      if (!seen[v]) seen[v] = 1, stack.push_back(v);
  }
  return seen;
}

double energy_of(const WeightedGraph& g, const VectorXd& x) {
  double e = 0.0;
  for (const Edge& edge : g.edges())
    if (edge.u != edge.v) e += 2.0 * edge.w * (x[edge.u] - x[edge.v]) * (x[edge.u] - x[edge.v]);
  return e / g.total();
}

}  // namespace

Potentials electrical_potentials(const WeightedGraph& g, Vertex s, Vertex t,
                                 const StOptions& options) {
  const int n = g.size();
  if (s < 0 || s >= n || t < 0 || t >= n) throw InputError("terminal out of range");
  if (s == t) throw InputError("terminals must differ");

  Potentials pot;
  pot.s = s;
  pot.t = t;
  pot.x = VectorXd::Zero(n);
  const std::vector<int> comp = component_of(g, s);
  if (!comp[t]) {
    pot.disconnected = true;
    for (Vertex v = 0; v < n; ++v) pot.x[v] = comp[v] ? 0.0 : 1.0;
    return pot;
  }

  // Unknowns: the component's vertices other than s and t.
  std::vector<int> slot(static_cast<std::size_t>(n), -1);
  std::vector<Vertex> interior;
  for (Vertex v = 0; v < n; ++v)
    if (comp[v] && v != s && v != t) slot[v] = static_cast<int>(interior.size()), interior.push_back(v);
  pot.x[t] = 1.0;
  const int m = static_cast<int>(interior.size());
  if (m > 0) {
    // Unnormalized Laplacian; scaling does not change the harmonic solution.
    std::vector<Eigen::Triplet<double>> trip;
    VectorXd rhs = VectorXd::Zero(m);
    VectorXd diag = VectorXd::Zero(m);
    for (const Edge& e : g.edges()) {
      if (e.u == e.v) continue;
      const int a = slot[e.u], b = slot[e.v];
      if (a >= 0) diag[a] += e.w;
      if (b >= 0) diag[b] += e.w;
      if (a >= 0 && b >= 0) {
        trip.emplace_back(a, b, -e.w);
        trip.emplace_back(b, a, -e.w);
      }
      if (a >= 0 && e.v == t) rhs[a] += e.w;
      if (b >= 0 && e.u == t) rhs[b] += e.w;
    }
    for (int i = 0; i < m; ++i) trip.emplace_back(i, i, diag[i]);
    Eigen::SparseMatrix<double> a(m, m);
    a.setFromTriplets(trip.begin(), trip.end());

    VectorXd y;
    if (n <= options.direct_limit) {
      Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(a);
      if (solver.info() != Eigen::Success) throw SolverError("Laplacian factorization failed");
      y = solver.solve(rhs);
    } else {
      Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper> cg(a);
      cg.setTolerance(options.solve_tol);
      cg.setMaxIterations(std::max(1000, 10 * m));
      y = cg.solve(rhs);
      if (cg.info() != Eigen::Success) throw SolverError("conjugate gradient did not converge");
    }
    const double scale = std::max(diag.maxCoeff(), 1e-300);
    const double residual = (a * y - rhs).cwiseAbs().maxCoeff() / scale;
    if (!(residual <= options.solve_tol))
      throw SolverError("Laplacian residual " + std::to_string(residual) + " exceeds tolerance");
    for (int i = 0; i < m; ++i) pot.x[interior[i]] = y[i];
  }
  for (Vertex v = 0; v < n; ++v)
    if (!(pot.x[v] >= -kRangeTol && pot.x[v] <= 1.0 + kRangeTol))
      throw SolverError("potential of vertex " + std::to_string(v) + " leaves [0, 1]");

  VectorXd lx = VectorXd::Zero(n);
  for (const Edge& e : g.edges()) {
    const double flux = 2.0 * e.w / g.total() * (pot.x[e.u] - pot.x[e.v]);
    lx[e.u] += flux;
    lx[e.v] -= flux;
  }
  for (Vertex v = 0; v < n; ++v)
    if (v != s && v != t) pot.residual = std::max(pot.residual, std::abs(lx[v]));
  pot.energy = energy_of(g, pot.x);
  return pot;
}

StSweep st_sweep(const WeightedGraph& g, const Potentials& pot) {
  const int n = g.size();
  if (pot.x.size() != n) throw InputError("potentials have wrong length");
  const Edge demand[] = {{pot.s, pot.t, 1.0}};
  const InstancePair pair(g, WeightedGraph::from_edges(n, demand));
  SweepResult r = sweep_cut(pot.x, pair);
  if (!r.cut.contains(pot.s) || r.cut.contains(pot.t))
    throw SolverError("sweep cut does not separate s from t");
  return {std::move(r.cut), r.report.g_cut};
}

Flow extract_flow(const WeightedGraph& g, const Potentials& pot, const StOptions& options) {
  const int n = g.size();
  if (pot.x.size() != n) throw InputError("potentials have wrong length");
  Flow flow;
  VectorXd net = VectorXd::Zero(n);
  for (const Edge& e : g.edges()) {
    if (e.u == e.v) continue;
    const double cap = 2.0 * e.w / g.total();
    const double f = cap * (pot.x[e.v] - pot.x[e.u]);
    flow.edges.push_back({e.u, e.v, f});
    net[e.v] += f;
    net[e.u] -= f;
    flow.max_capacity_excess = std::max(flow.max_capacity_excess, std::abs(f) - cap);
  }
  flow.value = net[pot.t];
  for (Vertex v = 0; v < n; ++v)
    if (v != pot.s && v != pot.t)
      flow.max_conservation_residual = std::max(flow.max_conservation_residual, std::abs(net[v]));

  if (flow.max_conservation_residual > options.flow_tol)
    throw SolverError("flow violates conservation by " +
                      std::to_string(flow.max_conservation_residual));
  if (flow.max_capacity_excess > options.flow_tol)
    throw SolverError("flow exceeds capacity by " + std::to_string(flow.max_capacity_excess));
  if (std::abs(flow.value - pot.energy) > options.flow_tol)
    throw SolverError("flow value differs from the energy");
  return flow;
}

StCertificate st_certificate(const WeightedGraph& g, Vertex s, Vertex t,
                             const StOptions& options) {
  StCertificate cert;
  cert.potentials = electrical_potentials(g, s, t, options);
  cert.sweep = st_sweep(g, cert.potentials);
  cert.flow = extract_flow(g, cert.potentials, options);
  if (cert.potentials.disconnected) {
    cert.ratio = 0.0;
    cert.ratio_holds = cert.sweep.cut_fraction == 0.0;
  } else {
    cert.ratio = cert.sweep.cut_fraction / cert.flow.value;
    cert.ratio_holds = cert.ratio <= (1.0 / std::sqrt(cert.potentials.energy)) * (1.0 + 1e-6);
  }
  return cert;
}

}  // namespace sparsecut
