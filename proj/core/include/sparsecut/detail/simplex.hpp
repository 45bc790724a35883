#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace sparsecut::detail {

struct SparseColumn {
  std::vector<int> rows;
  std::vector<double> values;
};

/// Revised primal simplex for
///
///   minimize  c'x   subject to  A x = b,  x >= 0,   with b >= 0,
///
/// started from the identity basis of m slack columns (indices 0..m-1) created
/// by the constructor. Columns can be appended between
/// solves; the current basis stays primal feasible, so re-solves warm start.
/// The basis inverse is kept dense and refactored periodically.
class RevisedSimplex {
 public:
  enum class Status { kOptimal, kUnbounded, kIterationLimit };

  RevisedSimplex(Eigen::VectorXd b, const Eigen::VectorXd& slack_cost);

  int rows() const { return static_cast<int>(b_.size()); }
  int columns() const { return static_cast<int>(cost_.size()); }

  /// Returns the new column's index.
  int add_column(SparseColumn column, double cost);

  Status solve(int max_iterations = 200000);

  double objective() const;
  /// Primal values of all columns.
  Eigen::VectorXd primal() const;
  /// Simplex multipliers y = c_B' B^-1; at optimality c_j - y'a_j >= 0.
  const Eigen::VectorXd& multipliers() const { return y_; }
  int iterations() const { return iterations_; }

 private:
  void refactor();
  void compute_multipliers();

  Eigen::VectorXd b_;
  std::vector<SparseColumn> columns_;
  std::vector<double> cost_;
  std::vector<int> basis_;         // basis_[row] = column index
  std::vector<int> basis_row_of_;  // -1 when nonbasic
  Eigen::MatrixXd binv_;
  Eigen::VectorXd x_basic_;
  Eigen::VectorXd y_;
  int iterations_ = 0;
  int since_refactor_ = 0;
};

}  // namespace sparsecut::detail
