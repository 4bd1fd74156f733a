#include "core/riccati.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "core/errors.hpp"
#include "core/linalg.hpp"
#include "core/lyapunov.hpp"

namespace netinfer {

namespace {

bool is_hurwitz(const Eigen::MatrixXd& M) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(M, /*computeEigenvectors=*/false);
  return es.eigenvalues().real().maxCoeff() < 0.0;
}

double care_residual(const Eigen::MatrixXd& A, const Eigen::MatrixXd& G,
                     const Eigen::MatrixXd& Q, const Eigen::MatrixXd& P) {
  return (A.transpose() * P + P * A - P * G * P + Q).norm();
}

}  // namespace

CareResult solve_care(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                      const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R,
                      int max_iters) {
  const Eigen::Index nn = A.rows();
  if (B.rows() != nn || Q.rows() != nn || Q.cols() != nn ||
      R.rows() != B.cols() || R.cols() != B.cols())
    throw DimensionError("solve_care: inconsistent shapes");
  if ((Q - Q.transpose()).norm() > 1e-8 * std::max(1.0, Q.norm()))
    throw DimensionError("solve_care: Q must be symmetric");

  Eigen::LLT<Eigen::MatrixXd> rchol(R);
  if (rchol.info() != Eigen::Success)
    throw SingularMatrixError("solve_care: R must be positive definite", 0.0);
  const Eigen::MatrixXd G = B * rchol.solve(B.transpose());

  // Initial stabilizing gain: K0 = c B^T, c in {0, c0 2^j}.
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(B.cols(), nn);
  bool stabilized = is_hurwitz(A);
  if (!stabilized) {
    double c = 1e-3;
    for (int j = 0; j <= 60; ++j, c *= 2.0) {
      if (is_hurwitz(A - c * (B * B.transpose()))) {
        K = c * B.transpose();
        stabilized = true;
        break;
      }
    }
  }
  if (!stabilized)
    throw NoConvergenceError(
        "no stabilizing initial gain of the form c B^T was found");

  // Kleinman iteration: P_i from the closed-loop Lyapunov equation, then
  // K_{i+1} = R^{-1} B^T P_i; monotonically decreasing to the stabilizing
  // solution.
  CareResult result;
  Eigen::MatrixXd P_prev;
  for (int it = 0; it < max_iters; ++it) {
    const Eigen::MatrixXd Acl = A - B * K;
    const Eigen::MatrixXd W = Q + K.transpose() * R * K;
    const Eigen::MatrixXd P = solve_lyapunov(Acl, W);
    K = rchol.solve(B.transpose() * P);
    result.P = P;
    result.iterations = it + 1;
    if (it > 0 &&
        (P - P_prev).norm() <= 1e-13 * std::max(1.0, P.norm()))
      break;
    P_prev = P;
  }
  result.K = K;
  result.residual = care_residual(A, G, Q, result.P);

  const double scale =
      Q.norm() + result.P.norm() * result.P.norm() * G.norm();
  if (!(result.residual <= 1e-8 * std::max(1.0, scale)))
    throw NoConvergenceError("Newton iteration stalled with residual " +
                             std::to_string(result.residual));
  return result;
}

RowSumReport check_row_sum_conditions(const Eigen::MatrixXd& Q,
                                      const Eigen::MatrixXd& P, int N,
                                      int n) {
  if (Q.rows() != N * n || P.rows() != N * n)
    throw DimensionError("check_row_sum_conditions: bad shapes");
  RowSumReport rep;
  for (int i = 0; i < N; ++i) {
    Eigen::MatrixXd sq = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd sp = Eigen::MatrixXd::Zero(n, n);
    for (int j = 0; j < N; ++j) {
      sq += block_of(Q, i, j, n);
      sp += block_of(P, i, j, n);
    }
    rep.max_q_rowsum = std::max(rep.max_q_rowsum, sq.norm());
    rep.max_p_rowsum = std::max(rep.max_p_rowsum, sp.norm());
  }
  const double tol =
      1e-8 * std::max({1.0, Q.norm(), P.norm()});
  rep.pass = rep.max_q_rowsum <= tol && rep.max_p_rowsum <= tol;
  return rep;
}

}  // namespace netinfer
