#include "sparsecut/detail/sdp_ipm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sparsecut/errors.hpp"

namespace sparsecut::detail {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct FullEntry {
  int row;
  int col;
  double value;
};

// A constraint matrix in the forms the Schur complement needs.
struct Operator {
  std::vector<FullEntry> full;  // both (r,c) and (c,r) for off-diagonal entries
  std::vector<int> columns;     // distinct columns touched
  bool dense = false;
  MatrixXd matrix;              // filled when dense
  int lin_index = -1;
  double lin_coef = 0.0;
};

Operator make_operator(const SdpConstraint& c, int dim) {
  Operator op;
  op.lin_index = c.lin_index;
  op.lin_coef = c.lin_coef;
  std::vector<char> touched(static_cast<std::size_t>(dim), 0);
  for (const SymEntry& e : c.entries) {
    op.full.push_back({e.row, e.col, e.value});
    if (e.row != e.col) op.full.push_back({e.col, e.row, e.value});
    touched[e.row] = touched[e.col] = 1;
  }
  for (int j = 0; j < dim; ++j)
    if (touched[j]) op.columns.push_back(j);
  op.dense = op.full.size() > static_cast<std::size_t>(4 * dim);
  if (op.dense) {
    op.matrix = MatrixXd::Zero(dim, dim);
    for (const FullEntry& e : op.full) op.matrix(e.row, e.col) = e.value;
  }
  return op;
}

MatrixXd sym(const MatrixXd& a) { return 0.5 * (a + a.transpose()); }

class Model {
 public:
  explicit Model(const SdpProblem& p) : p_(p) {
    for (const auto& c : p.constraints) ops_.push_back(make_operator(c, p.dim));
    b_.resize(static_cast<Eigen::Index>(ops_.size()));
    for (std::size_t i = 0; i < ops_.size(); ++i) b_[static_cast<Eigen::Index>(i)] = p.constraints[i].rhs;
  }

  int m() const { return static_cast<int>(ops_.size()); }
  int dim() const { return p_.dim; }
  int lin() const { return static_cast<int>(p_.lin_cost.size()); }
  const VectorXd& b() const { return b_; }
  const MatrixXd& cost() const { return p_.cost; }
  const VectorXd& lin_cost() const { return p_.lin_cost; }

  VectorXd apply(const MatrixXd& X, const VectorXd& x) const {
    VectorXd out(m());
    for (int i = 0; i < m(); ++i) {
      const Operator& op = ops_[i];
      double s = 0.0;
      if (op.dense) s = op.matrix.cwiseProduct(X).sum();
      else
        for (const FullEntry& e : op.full) s += e.value * X(e.row, e.col);
      if (op.lin_index >= 0) s += op.lin_coef * x[op.lin_index];
      out[i] = s;
    }
    return out;
  }

  void apply_adjoint(const VectorXd& y, MatrixXd& S, VectorXd& s) const {
    S = MatrixXd::Zero(dim(), dim());
    s = VectorXd::Zero(lin());
    for (int i = 0; i < m(); ++i) {
      const Operator& op = ops_[i];
      if (op.dense) S.noalias() += y[i] * op.matrix;
      else
        for (const FullEntry& e : op.full) S(e.row, e.col) += y[i] * e.value;
      if (op.lin_index >= 0) s[op.lin_index] += y[i] * op.lin_coef;
    }
  }

  // M_ij = tr(A_i X A_j W) + sum over linear terms of a_i a_j x / z.
  MatrixXd schur(const MatrixXd& X, const MatrixXd& W, const VectorXd& x,
                 const VectorXd& z) const {
    const int k = dim();
    MatrixXd M = MatrixXd::Zero(m(), m());
    MatrixXd xa(k, k);
    MatrixXd P(k, k);
    for (int j = 0; j < m(); ++j) {
      const Operator& opj = ops_[j];
      if (opj.dense) {
        P.noalias() = X * opj.matrix * W;
      } else {
        xa.setZero();
        for (const FullEntry& e : opj.full) xa.col(e.col) += e.value * X.col(e.row);
        P.setZero();
        for (int c : opj.columns) P.noalias() += xa.col(c) * W.row(c);
      }
      for (int i = 0; i <= j; ++i) {
        const Operator& opi = ops_[i];
        double s = 0.0;
        if (opi.dense) s = opi.matrix.cwiseProduct(P.transpose()).sum();
        else
          for (const FullEntry& e : opi.full) s += e.value * P(e.col, e.row);
        M(i, j) = s;
      }
    }
    for (int j = 0; j < m(); ++j) {
      const Operator& opj = ops_[j];
      if (opj.lin_index < 0) continue;
      for (int i = 0; i <= j; ++i) {
        const Operator& opi = ops_[i];
        if (opi.lin_index == opj.lin_index)
          M(i, j) += opi.lin_coef * opj.lin_coef * x[opj.lin_index] / z[opj.lin_index];
      }
    }
    return M.selfadjointView<Eigen::Upper>();
  }

 private:
  const SdpProblem& p_;
  std::vector<Operator> ops_;
  VectorXd b_;
};

// Largest alpha with X + alpha dX PSD, +inf when unbounded.
double psd_step(const MatrixXd& X, const MatrixXd& dX) {
  Eigen::LLT<MatrixXd> llt(X);
  if (llt.info() != Eigen::Success) return 0.0;
  const MatrixXd L = llt.matrixL();
  MatrixXd t = L.triangularView<Eigen::Lower>().solve(dX);
  t = L.triangularView<Eigen::Lower>().solve(t.transpose()).transpose();
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(sym(t), Eigen::EigenvaluesOnly);
  const double lmin = eig.eigenvalues().minCoeff();
  return lmin < 0.0 ? -1.0 / lmin : std::numeric_limits<double>::infinity();
}

double lin_step(const VectorXd& x, const VectorXd& dx) {
  double a = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (dx[i] < 0.0) a = std::min(a, -x[i] / dx[i]);
  return a;
}

VectorXd solve_spd(const MatrixXd& M, const VectorXd& rhs) {
  Eigen::LLT<MatrixXd> llt(M);
  if (llt.info() == Eigen::Success) return llt.solve(rhs);
  Eigen::LDLT<MatrixXd> ldlt(M);
  if (ldlt.info() != Eigen::Success) throw SolverError("Schur complement factorization failed");
  return ldlt.solve(rhs);
}

}  // namespace

double inner(const std::vector<SymEntry>& entries, const Eigen::MatrixXd& x) {
  double s = 0.0;
  for (const SymEntry& e : entries)
    s += (e.row == e.col ? 1.0 : 2.0) * e.value * x(e.row, e.col);
  return s;
}

SdpResult solve_sdp(const SdpProblem& problem, const SdpOptions& options) {
  const Model model(problem);
  const int k = model.dim();
  const int nl = model.lin();
  const int m = model.m();
  if (k <= 0 || m == 0) throw SolverError("empty semidefinite program");
  const double total_dim = static_cast<double>(k + nl);

  double max_a_norm = 0.0;
  double xi = std::max(10.0, std::sqrt(static_cast<double>(k)));
  for (int i = 0; i < m; ++i) {
    double fro = 0.0;
    for (const SymEntry& e : problem.constraints[i].entries)
      fro += (e.row == e.col ? 1.0 : 2.0) * e.value * e.value;
    fro = std::sqrt(fro + problem.constraints[i].lin_coef * problem.constraints[i].lin_coef);
    max_a_norm = std::max(max_a_norm, fro);
    xi = std::max(xi, k * (1.0 + std::abs(model.b()[i])) / (1.0 + fro));
  }
  const double eta = std::max({10.0, std::sqrt(static_cast<double>(k)), model.cost().norm(),
                               max_a_norm});

  MatrixXd X = xi * MatrixXd::Identity(k, k);
  MatrixXd Z = eta * MatrixXd::Identity(k, k);
  VectorXd x = VectorXd::Constant(nl, xi);
  VectorXd z = VectorXd::Constant(nl, eta);
  VectorXd y = VectorXd::Zero(m);

  const double b_norm = model.b().norm();
  const double c_norm = std::sqrt(model.cost().squaredNorm() + model.lin_cost().squaredNorm());

  SdpResult best;
  double best_merit = std::numeric_limits<double>::infinity();
  auto record = [&](int iteration, double pobj, double dobj, double gap, double pinf,
                    double dinf) {
    const double merit = std::max({gap, pinf, dinf});
    if (merit < best_merit) {
      best_merit = merit;
      best.X = X, best.x = x, best.y = y, best.Z = Z;
      best.primal_objective = pobj, best.dual_objective = dobj;
      best.relative_gap = gap, best.primal_infeasibility = pinf;
      best.dual_infeasibility = dinf, best.iterations = iteration;
    }
    return merit;
  };

  MatrixXd At;
  VectorXd at;
  for (int iter = 0; iter <= options.max_iterations; ++iter) {
    const VectorXd rp = model.b() - model.apply(X, x);
    model.apply_adjoint(y, At, at);
    const MatrixXd Rd = model.cost() - Z - At;
    const VectorXd rd = model.lin_cost() - z - at;

    const double pobj = model.cost().cwiseProduct(X).sum() + model.lin_cost().dot(x);
    const double dobj = model.b().dot(y);
    const double gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
    const double pinf = rp.norm() / (1.0 + b_norm);
    const double dinf = std::sqrt(Rd.squaredNorm() + rd.squaredNorm()) / (1.0 + c_norm);
    record(iter, pobj, dobj, gap, pinf, dinf);
    if (gap <= options.gap_tol && pinf <= options.feas_tol && dinf <= options.feas_tol) break;
    if (iter == options.max_iterations) break;

    const double mu = (X.cwiseProduct(Z).sum() + x.dot(z)) / total_dim;
    Eigen::LLT<MatrixXd> zchol(Z);
    if (zchol.info() != Eigen::Success) break;
    const MatrixXd W = zchol.solve(MatrixXd::Identity(k, k));
    const MatrixXd M = model.schur(X, W, x, z);
    const MatrixXd xrdw = sym(X * Rd * W);
    const VectorXd xrd_z = x.cwiseProduct(rd).cwiseQuotient(z);

    auto direction = [&](double sigma, const MatrixXd* corr_X, const VectorXd* corr_x,
                         MatrixXd& dX, VectorXd& dx, VectorXd& dy, MatrixXd& dZ,
                         VectorXd& dz) {
      MatrixXd tX = sigma * mu * W - X - xrdw;
      VectorXd tx = (sigma * mu) * z.cwiseInverse() - x - xrd_z;
      if (corr_X) {
        tX -= *corr_X;
        tx -= *corr_x;
      }
      const VectorXd h = rp - model.apply(tX, tx);
      dy = solve_spd(M, h);
      MatrixXd ad;
      VectorXd adl;
      model.apply_adjoint(dy, ad, adl);
      dZ = Rd - ad;
      dz = rd - adl;
      dX = sigma * mu * W - X - sym(X * dZ * W);
      dx = (sigma * mu) * z.cwiseInverse() - x - x.cwiseProduct(dz).cwiseQuotient(z);
      if (corr_X) {
        dX -= *corr_X;
        dx -= *corr_x;
      }
    };

    MatrixXd dX, dZ;
    VectorXd dx, dy, dz;
    // A singular Schur matrix means the iterates are at the limit of
    // precision; the best recorded iterate is used.
    try {
      direction(0.0, nullptr, nullptr, dX, dx, dy, dZ, dz);
    } catch (const SolverError&) {
      break;
    }
    const double ap_aff = std::min(1.0, std::min(psd_step(X, dX), lin_step(x, dx)));
    const double ad_aff = std::min(1.0, std::min(psd_step(Z, dZ), lin_step(z, dz)));
    const double mu_aff = ((X + ap_aff * dX).cwiseProduct(Z + ad_aff * dZ).sum() +
                           (x + ap_aff * dx).dot(z + ad_aff * dz)) /
                          total_dim;
    const double sigma = std::clamp(std::pow(mu_aff / mu, 3.0), 0.0, 1.0);

    const MatrixXd corr_X = sym(dX * dZ * W);
    const VectorXd corr_x = dx.cwiseProduct(dz).cwiseQuotient(z);
    try {
      direction(sigma, &corr_X, &corr_x, dX, dx, dy, dZ, dz);
    } catch (const SolverError&) {
      break;
    }

    const double gamma = std::max(0.9, std::min(0.99, 1.0 - 0.5 * (1.0 - std::min(ap_aff, ad_aff))));
    const double ap = std::min(1.0, gamma * std::min(psd_step(X, dX), lin_step(x, dx)));
    const double ad = std::min(1.0, gamma * std::min(psd_step(Z, dZ), lin_step(z, dz)));
    if (ap < 1e-12 && ad < 1e-12) break;

    X = sym(X + ap * dX);
    x += ap * dx;
    y += ad * dy;
    Z = sym(Z + ad * dZ);
    z += ad * dz;
  }

  if (best.relative_gap <= options.fallback_tol &&
      best.primal_infeasibility <= options.fallback_tol &&
      best.dual_infeasibility <= options.fallback_tol)
    return best;
  throw SolverError("semidefinite program did not converge (gap " +
                    std::to_string(best.relative_gap) + ", primal infeasibility " +
                    std::to_string(best.primal_infeasibility) + ", dual infeasibility " +
                    std::to_string(best.dual_infeasibility) + ")");
}

}  // namespace sparsecut::detail
