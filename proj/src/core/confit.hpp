#pragma once

#include <vector>

#include <Eigen/Dense>

#include "core/estimation.hpp"

namespace netinfer {

struct ConstrainedFitConfig {
  int max_iters = 1500;
  double step_scale = 1.0;   // multiplies the 1/(2 lambda_max) base step
  double tolerance = 1e-14;  // relative objective-decrease stop
  int dykstra_rounds = 50;
  double radius = 1.0 - 1e-9;  // spectral-ball radius around I
  double init_rcond = 3e-8;    // truncation for the least-squares start
};

/// Frobenius-nearest matrix to M with ||M' - I|| <= radius (SVD clipping of
/// M - I).
Eigen::MatrixXd project_spectral_ball(const Eigen::MatrixXd& M, double radius);

/// Minimal Frobenius adjustment equalizing all N row-block sums of an
/// (N n) x (N n) matrix.
Eigen::MatrixXd project_block_equality(const Eigen::MatrixXd& M, int N, int n);

struct ConstrainedFitResult {
  Eigen::MatrixXd Ad;
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;
  double ball_violation = 0.0;      // after the final projection (<= 0 goal)
  double equality_violation = 0.0;  // max row-block-sum deviation
  std::vector<double> objective_trace;  // accepted iterations only
};

/// Projected-gradient fit of the transition matrix under the spectral-ball
/// and block-equality constraints. Objective:
///   Constant label:  || Sigma1 - A (Sigma0 - I (x) Gamma) ||_F^2
///   otherwise:       || Sigma1 - A Sigma0 ||_F^2
/// Feasibility of the returned iterate is guaranteed:
/// ||Ad - I|| <= radius exactly, block equality to Dykstra tolerance.
ConstrainedFitResult fit_Ad_constrained(const CovariancePair& cov,
                                        const Eigen::MatrixXd& gamma,
                                        const PatternLabel& label,
                                        const ConstrainedFitConfig& cfg = {});

}  // namespace netinfer
