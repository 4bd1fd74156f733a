#pragma once

#include <Eigen/Dense>

namespace netinfer {

struct CareResult {
  Eigen::MatrixXd P;  // stabilizing solution
  Eigen::MatrixXd K;  // R^{-1} B^T P
  double residual = 0.0;
  int iterations = 0;
};

/// Stabilizing solution of A^T P + P A - P B R^{-1} B^T P + Q = 0 by
/// Newton-Kleinman iteration; each step solves a Lyapunov equation via the
/// Bartels-Stewart approach. The initial stabilizing gain is K0 = c B^T with
/// c grown geometrically (c = 0 first, then doublings) until
/// A - c B B^T is Hurwitz. Throws NoConvergenceError when no stabilizing
/// start is found within 60 doublings or the Newton residual stalls.
CareResult solve_care(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                      const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R,
                      int max_iters = 60);

struct RowSumReport {
  double max_q_rowsum = 0.0;
  double max_p_rowsum = 0.0;
  bool pass = false;
};

/// Necessary consensus-optimality conditions: every row-block sum of Q and P
/// vanishes. Passes iff both maxima are <= 1e-8 * max(1, ||Q||_F, ||P||_F).
RowSumReport check_row_sum_conditions(const Eigen::MatrixXd& Q,
                                      const Eigen::MatrixXd& P, int N, int n);

}  // namespace netinfer
