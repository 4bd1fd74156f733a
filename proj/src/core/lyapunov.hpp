#pragma once

#include <Eigen/Dense>

namespace netinfer {

/// Solves A^T X + X A + Q = 0 by the Bartels-Stewart approach on the complex
/// Schur form of A. Requires lambda_i(A) + conj(lambda_j(A)) != 0 for all
/// pairs (holds for Hurwitz A). The result is symmetrized when Q is
/// symmetric.
Eigen::MatrixXd solve_lyapunov(const Eigen::MatrixXd& A,
                               const Eigen::MatrixXd& Q);

}  // namespace netinfer
