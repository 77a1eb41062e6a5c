#include "riskrev/nnls.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "riskrev/errors.hpp"

namespace riskrev {
namespace {

double kkt_residual(const Eigen::VectorXd& x, const Eigen::VectorXd& w) {
  double r = 0.0;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    r = std::max({r, w[j], std::abs(x[j] * w[j])});
  }
  return r;
}

// Unconstrained least squares restricted to the passive columns.
Eigen::VectorXd passive_solve(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                              const std::vector<bool>& passive) {
  std::vector<Eigen::Index> cols;
  for (Eigen::Index j = 0; j < A.cols(); ++j) {
    if (passive[static_cast<std::size_t>(j)]) cols.push_back(j);
  }
  Eigen::MatrixXd sub(A.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) sub.col(static_cast<Eigen::Index>(k)) = A.col(cols[k]);
  const Eigen::VectorXd z = sub.completeOrthogonalDecomposition().solve(b);
  Eigen::VectorXd s = Eigen::VectorXd::Zero(A.cols());
  for (std::size_t k = 0; k < cols.size(); ++k) s[cols[k]] = z[static_cast<Eigen::Index>(k)];
  return s;
}

}  // namespace

NnlsResult nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, double tol,
                int max_iterations) {
  if (A.rows() != b.size()) throw InvalidArgument("nnls: dimension mismatch");
  if (A.cols() == 0) throw InvalidArgument("nnls: no columns");
  if (!(tol > 0.0)) throw InvalidArgument("nnls: tol must be positive");
  const Eigen::Index n = A.cols();
  if (max_iterations <= 0) max_iterations = static_cast<int>(3 * n + 30);

  std::vector<bool> passive(static_cast<std::size_t>(n), false);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd w = A.transpose() * b;
  const double w_tol = 1e-14 * (1.0 + A.norm() * b.norm());

  int iter = 0;
  for (; iter < max_iterations; ++iter) {
    Eigen::Index best = -1;
    double best_w = w_tol;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!passive[static_cast<std::size_t>(j)] && w[j] > best_w) {
        best_w = w[j];
        best = j;
      }
    }
    if (best < 0) break;
    passive[static_cast<std::size_t>(best)] = true;

    for (Eigen::Index inner = 0; inner <= n; ++inner) {
      const Eigen::VectorXd s = passive_solve(A, b, passive);
      double alpha = 1.0;
      bool feasible = true;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[static_cast<std::size_t>(j)] && s[j] <= 0.0) {
          feasible = false;
          const double denom = x[j] - s[j];
          if (denom > 0.0) alpha = std::min(alpha, x[j] / denom);
          else alpha = 0.0;
        }
      }
      if (feasible) {
        x = s;
        break;
      }
      x += alpha * (s - x);
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[static_cast<std::size_t>(j)] && x[j] <= 1e-15) {
          passive[static_cast<std::size_t>(j)] = false;
          x[j] = 0.0;
        }
      }
    }
    w = A.transpose() * (b - A * x);
  }

  const double r = kkt_residual(x, w);
  if (!(r <= tol)) {
    throw NumericalFailure("nnls: KKT residual " + brief(r) + " exceeds tolerance",
                           r);
  }
  return {x, r, iter};
}

}  // namespace riskrev
