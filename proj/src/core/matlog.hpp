#pragma once

#include <Eigen/Dense>

namespace netinfer {

struct LogResult {
  Eigen::MatrixXd log;     // log(M)
  int terms_used = 0;
  double residual = 0.0;   // ||exp(log) - M||_F
  bool converged = false;  // residual <= 1e-6 * max(1, ||M||_F)
};

/// Principal logarithm by the Mercator series
///   log(M) = sum_{k>=1} (-1)^{k+1} (M - I)^k / k,
/// truncated when the term norm falls below 1e-14 of the partial sum.
/// Acceptance is residual-based (re-exponentiation), not term-count-based.
/// Throws DivergentSeriesError when ||M - I|| >= 1 (spectral norm) and
/// NoConvergenceError when the term budget is exhausted with a large
/// residual.
LogResult matrix_log_series(const Eigen::MatrixXd& M, int k_max = 10000);

struct AcRecovery {
  Eigen::MatrixXd Ac;
  LogResult log;
  double tau_max_post = 0.0;       // ln2 / ||Ac_hat|| evaluated a posteriori
  bool uniqueness_warning = false; // tau >= tau_max_post
};

/// Ac = log(Ad) / tau, with an a-posteriori check of the sampling-period
/// uniqueness condition.
AcRecovery recover_Ac(const Eigen::MatrixXd& Ad, double tau, int k_max = 10000);

/// tau_max = ln2 / ||Ac|| (spectral norm); +inf for Ac = 0.
double sampling_bound(const Eigen::MatrixXd& Ac);

}  // namespace netinfer
