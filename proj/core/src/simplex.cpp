#include "sparsecut/detail/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sparsecut/errors.hpp"

namespace sparsecut::detail {
namespace {

constexpr double kPricingTol = 1e-11;
constexpr double kPivotTol = 1e-9;
constexpr int kRefactorEvery = 64;
constexpr int kStallBeforeBland = 50;

}  // namespace

RevisedSimplex::RevisedSimplex(Eigen::VectorXd b, const Eigen::VectorXd& slack_cost)
    : b_(std::move(b)) {
  const int m = rows();
  if (slack_cost.size() != m) throw SolverError("slack cost size mismatch");
  for (int i = 0; i < m; ++i) {
    if (b_[i] < 0.0) throw SolverError("simplex requires b >= 0");
    columns_.push_back({{i}, {1.0}});
    cost_.push_back(slack_cost[i]);
    basis_.push_back(i);
    basis_row_of_.push_back(i);
  }
  binv_ = Eigen::MatrixXd::Identity(m, m);
  x_basic_ = b_;
  compute_multipliers();
}

int RevisedSimplex::add_column(SparseColumn column, double cost) {
  for (int r : column.rows)
    if (r < 0 || r >= rows()) throw SolverError("column row out of range");
  columns_.push_back(std::move(column));
  cost_.push_back(cost);
  basis_row_of_.push_back(-1);
  return columns() - 1;
}

void RevisedSimplex::compute_multipliers() {
  Eigen::VectorXd cb(rows());
  for (int i = 0; i < rows(); ++i) cb[i] = cost_[basis_[i]];
  y_.noalias() = binv_.transpose() * cb;
}

void RevisedSimplex::refactor() {
  const int m = rows();
  Eigen::MatrixXd basis_matrix = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    const SparseColumn& col = columns_[basis_[i]];
    for (std::size_t k = 0; k < col.rows.size(); ++k)
      basis_matrix(col.rows[k], i) = col.values[k];
  }
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(basis_matrix);
  binv_ = lu.inverse();
  x_basic_.noalias() = binv_ * b_;
  for (int i = 0; i < m; ++i)
    if (x_basic_[i] < 0.0 && x_basic_[i] > -1e-9) x_basic_[i] = 0.0;
  since_refactor_ = 0;
}

RevisedSimplex::Status RevisedSimplex::solve(int max_iterations) {
  const int m = rows();
  Eigen::VectorXd direction(m);
  int stalled = 0;
  for (int iter = 0; iter < max_iterations; ++iter) {
    compute_multipliers();
    const bool bland = stalled >= kStallBeforeBland;

    // Pricing.
    int entering = -1;
    double best = -kPricingTol;
    for (int j = 0; j < columns(); ++j) {
      if (basis_row_of_[j] >= 0) continue;
      const SparseColumn& col = columns_[j];
      double reduced = cost_[j];
      for (std::size_t k = 0; k < col.rows.size(); ++k)
        reduced -= y_[col.rows[k]] * col.values[k];
      if (reduced < best) {
        entering = j;
        if (bland) break;
        best = reduced;
      }
    }
    if (entering < 0) {
      if (since_refactor_ == 0) return Status::kOptimal;
      // Confirm optimality against a fresh factorization.
      refactor();
      --iter;
      continue;
    }

    direction.setZero();
    const SparseColumn& col = columns_[entering];
    for (std::size_t k = 0; k < col.rows.size(); ++k)
      direction.noalias() += binv_.col(col.rows[k]) * col.values[k];

    // Ratio test; ties favour the larger pivot, or the lower column in Bland mode.
    int leaving = -1;
    double step = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i) {
      if (direction[i] <= kPivotTol) continue;
      const double ratio = std::max(x_basic_[i], 0.0) / direction[i];
      if (leaving < 0 || ratio < step - 1e-12) {
        leaving = i, step = ratio;
      } else if (ratio <= step + 1e-12) {
        const bool take = bland ? basis_[i] < basis_[leaving]
                                : direction[i] > direction[leaving];
        if (take) leaving = i, step = std::min(step, ratio);
      }
    }
    if (leaving < 0) return Status::kUnbounded;

    stalled = step > 1e-14 ? 0 : stalled + 1;

    const double pivot = direction[leaving];
    const Eigen::RowVectorXd pivot_row = binv_.row(leaving) / pivot;
    binv_.noalias() -= direction * pivot_row;
    binv_.row(leaving) = pivot_row;
    x_basic_ -= step * direction;
    x_basic_[leaving] = step;

    basis_row_of_[basis_[leaving]] = -1;
    basis_[leaving] = entering;
    basis_row_of_[entering] = leaving;
    ++iterations_;
    if (++since_refactor_ >= kRefactorEvery) refactor();
  }
  return Status::kIterationLimit;
}

double RevisedSimplex::objective() const {
  double z = 0.0;
  for (int i = 0; i < rows(); ++i) z += cost_[basis_[i]] * x_basic_[i];
  return z;
}

Eigen::VectorXd RevisedSimplex::primal() const {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(columns());
  for (int i = 0; i < rows(); ++i) x[basis_[i]] = x_basic_[i];
  return x;
}

}  // namespace sparsecut::detail
