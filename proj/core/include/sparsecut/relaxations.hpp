#pragma once

#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "sparsecut/graph.hpp"

namespace sparsecut {

/// Symmetric nonnegative distances with zero diagonal.
struct SemiMetric {
  Eigen::MatrixXd d;

  int size() const { return static_cast<int>(d.rows()); }
  double operator()(Vertex u, Vertex v) const { return d(u, v); }

  /// max over (u, v, w) of d(u,w) - d(u,v) - d(v,w); <= 0 for a metric.
  double max_triangle_violation() const;
};

/// One point per vertex, stored as the rows of `points`.
struct VectorEmbedding {
  Eigen::MatrixXd points;

  int size() const { return static_cast<int>(points.rows()); }
  int dim() const { return static_cast<int>(points.cols()); }

  /// d(u, v) = ||x_u - x_v||^2.
  SemiMetric squared_distances() const;
};

enum class RelaxationKind { kSpectral, kLeightonRao, kGoemansLinial };

std::string_view to_string(RelaxationKind kind);
/// Accepts "spectral", "lr", "sdp"; throws InputError otherwise.
RelaxationKind parse_relaxation_kind(std::string_view name);

struct SolveDiagnostics {
  int rounds = 0;                      ///< cutting-plane rounds
  int cuts = 0;                        ///< triangle constraints instantiated
  int iterations = 0;                  ///< inner solver iterations, summed
  double max_triangle_violation = 0.0;
  double normalization_residual = 0.0;
  double duality_gap = 0.0;            ///< last inner solve (SDP only)
};

/// A relaxation optimum with its witness. Exactly one witness member is
/// populated, according to `kind`.
struct RelaxationValue {
  RelaxationKind kind = RelaxationKind::kSpectral;
  double value = 0.0;
  Eigen::VectorXd x;          ///< spectral: x' L(H) x = 1
  SemiMetric metric;          ///< lr
  VectorEmbedding embedding;  ///< sdp
  SolveDiagnostics diagnostics;
};

struct RelaxationOptions {
  double solver_tol = 1e-6;
  double metric_tol = 1e-6;
  int max_rounds = 1000;
  /// Triangle constraints added per round; 0 selects 4n.
  int cuts_per_round = 0;
};

/// Smallest generalized eigenvalue of (L(G), L(H)) on the complement of the
/// common kernel. Throws InputError when L(H) vanishes.
RelaxationValue solve_spectral(const InstancePair& pair);

/// Linear program over semimetrics, by triangle-inequality cutting planes.
RelaxationValue solve_leighton_rao(const InstancePair& pair,
                                   const RelaxationOptions& options = {});

/// Semidefinite program over l2^2 metrics, by triangle-inequality cutting
/// planes around an interior-point solver.
RelaxationValue solve_goemans_linial(const InstancePair& pair,
                                     const RelaxationOptions& options = {});

RelaxationValue solve_relaxation(const InstancePair& pair, RelaxationKind kind,
                                 const RelaxationOptions& options = {});

struct ResidualReport {
  bool pass = false;
  double objective = 0.0;            ///< recomputed from the witness
  double max_residual = 0.0;
  std::string worst_constraint;      ///< empty when nothing is violated
  double objective_residual = 0.0;
  double normalization_residual = 0.0;
  double max_triangle_violation = 0.0;
  double structure_residual = 0.0;   ///< symmetry / diagonal / sign of a metric
};

/// Recomputes objective and constraint residuals from the witness alone.
/// Passes iff every residual is at most 10 * solver_tol.
ResidualReport verify_solution(const InstancePair& pair, const RelaxationValue& rv,
                               double solver_tol = 1e-6);

}  // namespace sparsecut
