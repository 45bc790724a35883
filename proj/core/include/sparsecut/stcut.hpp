#pragma once

#include <vector>

#include <Eigen/Dense>

#include "sparsecut/graph.hpp"

namespace sparsecut {

struct StOptions {
  double solve_tol = 1e-10;
  double flow_tol = 1e-8;
  /// Above this size the reduced Laplacian is solved by conjugate gradient.
  int direct_limit = 10000;
};

struct Potentials {
  Eigen::VectorXd x;
  Vertex s = 0;
  Vertex t = 0;
  /// sum over ordered pairs of Gbar(u,v) (x_u - x_v)^2
  double energy = 0.0;
  /// Max |(L x)_v| over vertices other than s and t.
  double residual = 0.0;
  /// s and t lie in different components: x is the component indicator and
  /// energy is 0.
  bool disconnected = false;
};

/// Harmonic extension of x_s = 0, x_t = 1. Vertices outside the component of
/// s and t get potential 0.
Potentials electrical_potentials(const WeightedGraph& g, Vertex s, Vertex t,
                                 const StOptions& options = {});

struct StSweep {
  Cut cut;              ///< contains s, excludes t
  double cut_fraction;  ///< Gbar(S)
};

StSweep st_sweep(const WeightedGraph& g, const Potentials& pot);

struct FlowEdge {
  Vertex u;
  Vertex v;
  double f;  ///< flow from u to v; negative means v to u
};

struct Flow {
  std::vector<FlowEdge> edges;  ///< one per edge of G, u < v
  double value = 0.0;           ///< net flow into t
  double max_conservation_residual = 0.0;
  double max_capacity_excess = 0.0;  ///< max(|f| - 2 Gbar(u,v)), <= 0 when feasible
};

/// f(u,v) = 2 Gbar(u,v) (x_v - x_u). Throws SolverError unless the flow
/// conserves, respects capacities 2 Gbar and has value equal to the energy,
/// all within flow_tol.
Flow extract_flow(const WeightedGraph& g, const Potentials& pot, const StOptions& options = {});

struct StCertificate {
  Potentials potentials;
  StSweep sweep;
  Flow flow;
  double ratio = 0.0;  ///< cut_fraction / flow value; 0 when disconnected
  bool ratio_holds = false;  ///< ratio <= (1 / sqrt(eps)) (1 + 1e-6)
};

StCertificate st_certificate(const WeightedGraph& g, Vertex s, Vertex t,
                             const StOptions& options = {});

}  // namespace sparsecut
