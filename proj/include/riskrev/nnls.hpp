#pragma once

#include <Eigen/Core>

namespace riskrev {

struct NnlsResult {
  Eigen::VectorXd x;
  double kkt_residual;  // max_j max(w_j, |x_j w_j|), w = A^T (b - A x)
  int iterations;
};

/// Lawson-Hanson active-set solver for min |A x - b| subject to x >= 0.
/// Throws NumericalFailure if the KKT residual stays above `tol` after
/// `max_iterations` outer steps (0 picks a cap from the column count).
NnlsResult nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, double tol,
                int max_iterations = 0);

}  // namespace riskrev
