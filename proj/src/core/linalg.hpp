#pragma once

#include <Eigen/Dense>

namespace netinfer {

Eigen::MatrixXd kron(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B);

/// Largest singular value.
double spectral_norm(const Eigen::MatrixXd& M);

/// 2-norm condition number (sigma_max / sigma_min); +inf for exact rank loss.
double condition_number_2(const Eigen::MatrixXd& M);

/// Column-major vectorization and its inverse.
Eigen::VectorXd vec(const Eigen::MatrixXd& M);
Eigen::MatrixXd unvec(const Eigen::VectorXd& v, Eigen::Index rows,
                       Eigen::Index cols);

/// n x n block at block-position (i, j) of a matrix partitioned into n x n
/// blocks.
inline Eigen::Block<const Eigen::MatrixXd> block_of(const Eigen::MatrixXd& M,
                                                    int i, int j, int n) {
  return M.block(i * n, j * n, n, n);
}

/// I_N (x) M.
Eigen::MatrixXd kron_identity(int N, const Eigen::MatrixXd& M);

}  // namespace netinfer
