#include "core/lyapunov.hpp"

#include <complex>

#include <Eigen/Eigenvalues>

#include "core/errors.hpp"

namespace netinfer {

Eigen::MatrixXd solve_lyapunov(const Eigen::MatrixXd& A,
                               const Eigen::MatrixXd& Q) {
  if (A.rows() != A.cols() || Q.rows() != Q.cols() || A.rows() != Q.rows())
    throw DimensionError("solve_lyapunov: A and Q must be square, same size");
  const Eigen::Index nn = A.rows();

  Eigen::ComplexSchur<Eigen::MatrixXd> schur(A, /*computeU=*/true);
  if (schur.info() != Eigen::Success)
    throw NoConvergenceError("Schur decomposition failed");
  const Eigen::MatrixXcd T = schur.matrixT();  // upper triangular
  const Eigen::MatrixXcd U = schur.matrixU();

  // Transformed equation: T^H Y + Y T = -F with Y = U^H X U.
  const Eigen::MatrixXcd F = U.adjoint() * Q * U;
  const Eigen::MatrixXcd Th = T.adjoint();  // lower triangular
  Eigen::MatrixXcd Y = Eigen::MatrixXcd::Zero(nn, nn);

  for (Eigen::Index j = 0; j < nn; ++j) {
    Eigen::VectorXcd rhs = -F.col(j);
    for (Eigen::Index k = 0; k < j; ++k) rhs -= Y.col(k) * T(k, j);
    // (T^H + T(j,j) I) y_j = rhs, lower triangular forward substitution
    for (Eigen::Index i = 0; i < nn; ++i) {
      std::complex<double> acc = rhs(i);
      for (Eigen::Index k = 0; k < i; ++k) acc -= Th(i, k) * Y(k, j);
      const std::complex<double> diag = Th(i, i) + T(j, j);
      if (std::abs(diag) < 1e-14)
        throw SingularMatrixError(
            "Lyapunov operator is singular (eigenvalue pair sums to zero)",
            std::numeric_limits<double>::infinity());
      Y(i, j) = acc / diag;
    }
  }
  Eigen::MatrixXd X = (U * Y * U.adjoint()).real();
  if ((Q - Q.transpose()).norm() <= 1e-12 * std::max(1.0, Q.norm()))
    X = 0.5 * (X + X.transpose()).eval();
  return X;
}

}  // namespace netinfer
