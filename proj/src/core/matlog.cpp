#include "core/matlog.hpp"

#include <cmath>
#include <limits>

#include "core/errors.hpp"
#include "core/linalg.hpp"
#include "core/matrix_exp.hpp"

namespace netinfer {

LogResult matrix_log_series(const Eigen::MatrixXd& M, int k_max) {
  if (M.rows() != M.cols()) throw DimensionError("log needs a square matrix");
  const Eigen::Index dim = M.rows();
  const Eigen::MatrixXd D =
      M - Eigen::MatrixXd::Identity(dim, dim);
  const double dist = spectral_norm(D);
  if (!(dist < 1.0))
    throw DivergentSeriesError(
        "||M - I|| = " + std::to_string(dist) +
        " >= 1; the logarithm series does not converge");

  LogResult result;
  result.log = D;
  result.terms_used = 1;
  Eigen::MatrixXd power = D;
  for (int k = 2; k <= k_max; ++k) {
    power = power * D;
    const double sign = (k % 2 == 0) ? -1.0 : 1.0;
    const Eigen::MatrixXd term = (sign / k) * power;
    result.log += term;
    result.terms_used = k;
    if (term.norm() <= 1e-14 * result.log.norm()) break;
  }
  result.residual = (matrix_exponential(result.log) - M).norm();
  result.converged = result.residual <= 1e-6 * std::max(1.0, M.norm());
  if (result.terms_used == k_max && !result.converged)
    throw NoConvergenceError(
        "logarithm series used the full term budget with residual " +
        std::to_string(result.residual));
  return result;
}

AcRecovery recover_Ac(const Eigen::MatrixXd& Ad, double tau, int k_max) {
  if (!(tau > 0.0)) throw DimensionError("tau must be positive");
  AcRecovery rec;
  rec.log = matrix_log_series(Ad, k_max);
  rec.Ac = rec.log.log / tau;
  rec.tau_max_post = sampling_bound(rec.Ac);
  rec.uniqueness_warning = tau >= rec.tau_max_post;
  return rec;
}

double sampling_bound(const Eigen::MatrixXd& Ac) {
  const double nrm = spectral_norm(Ac);
  if (nrm == 0.0) return std::numeric_limits<double>::infinity();
  return std::log(2.0) / nrm;
}

}  // namespace netinfer
