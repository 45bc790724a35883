#pragma once

#include <vector>

#include <Eigen/Dense>

namespace sparsecut::detail {

/// One entry (row <= col) of a symmetric constraint matrix.
struct SymEntry {
  int row;
  int col;
  double value;
};

/// <A, X> + lin_coef * x[lin_index] = rhs   (lin_index < 0: no linear term)
struct SdpConstraint {
  std::vector<SymEntry> entries;
  int lin_index = -1;
  double lin_coef = 0.0;
  double rhs = 0.0;
};

/// minimize <C, X> + c'x  s.t. constraints,  X PSD (dim x dim),  x >= 0.
struct SdpProblem {
  int dim = 0;
  Eigen::MatrixXd cost;
  Eigen::VectorXd lin_cost;  ///< size = number of linear variables
  std::vector<SdpConstraint> constraints;
};

struct SdpOptions {
  double gap_tol = 1e-9;
  double feas_tol = 1e-9;
  /// Accepted when the strict tolerances are not met before stagnation.
  double fallback_tol = 1e-6;
  int max_iterations = 120;
};

struct SdpResult {
  Eigen::MatrixXd X;
  Eigen::VectorXd x;
  Eigen::VectorXd y;
  Eigen::MatrixXd Z;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double relative_gap = 0.0;
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  int iterations = 0;
};

/// Infeasible-start primal-dual path following with the HKM search direction
/// and Mehrotra predictor-corrector steps. Throws SolverError when neither the
/// strict nor the fallback tolerances are reached.
SdpResult solve_sdp(const SdpProblem& problem, const SdpOptions& options = {});

/// <A, X> for a symmetric constraint given by its upper-triangle entries.
double inner(const std::vector<SymEntry>& entries, const Eigen::MatrixXd& x);

}  // namespace sparsecut::detail
