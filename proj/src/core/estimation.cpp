#include "core/estimation.hpp"

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"
#include "core/linalg.hpp"

namespace netinfer {

PatternLabel classify_pattern(const Trajectory& traj, int window,
                              double threshold) {
  const long T = traj.horizon();
  if (window <= 0 || window >= T)
    throw DimensionError("window must satisfy 0 < L < T");
  const auto& Y = traj.observations;

  PatternLabel label;
  label.window = window;
  label.threshold = threshold;
  double e1 = 0.0, e2 = 0.0;
  for (long k = T - window; k <= T - 1; ++k) {
    e1 += (Y.col(k + 1) - Y.col(k)).norm();
    e2 += (Y.col(k + 1) - 2.0 * Y.col(k) + Y.col(k - 1)).norm();
  }
  label.eps1 = e1 / window;
  label.eps2 = e2 / window;
  if (label.eps1 <= threshold)
    label.kind = PatternKind::Constant;
  else if (label.eps2 <= threshold)
    label.kind = PatternKind::LinearGrowth;
  else
    label.kind = PatternKind::Other;
  return label;
}

double default_threshold(const NoiseModel& noise) {
  const double smax = noise.sigma.size() ? noise.sigma.maxCoeff() : 0.0;
  return 3.0 * std::sqrt(2.0) * smax;
}

int default_window(long T) {
  return static_cast<int>(std::max<long>(1, std::min<long>(50, T / 5)));
}

CovariancePair sample_covariances(const Trajectory& traj) {
  auto [ym, yp] = stack_matrices(traj);
  CovariancePair cov;
  cov.samples = ym.cols();
  cov.sigma0 = ym * ym.transpose() / static_cast<double>(cov.samples);
  cov.sigma1 = yp * ym.transpose() / static_cast<double>(cov.samples);
  cov.y_minus = std::move(ym);
  cov.y_plus = std::move(yp);
  cov.has_stacks = true;
  return cov;
}

CovariancePair diff_covariances(const Trajectory& traj) {
  const long T = traj.horizon();
  if (T < 2) throw DimensionError("differenced covariances need T >= 2");
  const auto& Y = traj.observations;
  Eigen::MatrixXd D(Y.rows(), T);
  for (long t = 0; t < T; ++t) D.col(t) = Y.col(t + 1) - Y.col(t);
  CovariancePair cov;
  cov.samples = T;  // paper's 1/T normalizer; stacks have T-1 columns
  cov.differenced = true;
  cov.y_minus = D.leftCols(T - 1);
  cov.y_plus = D.rightCols(T - 1);
  cov.sigma0 = cov.y_minus * cov.y_minus.transpose() / static_cast<double>(T);
  cov.sigma1 = cov.y_plus * cov.y_minus.transpose() / static_cast<double>(T);
  cov.has_stacks = true;
  return cov;
}

namespace {

// X M = RHS via one LU factorization of M^T and Nn right-hand sides.
Eigen::MatrixXd solve_right(const Eigen::MatrixXd& RHS,
                            const Eigen::MatrixXd& M) {
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(M.transpose());
  return lu.solve(RHS.transpose()).transpose();
}

// Least-squares min ||X Ym - Yp||_F by column-pivoted QR with one step of
// iterative refinement. Identical in exact arithmetic to Yp Ym^T (Ym Ym^T)^-1
// but with condition kappa instead of kappa^2.
Eigen::MatrixXd solve_lstsq(const Eigen::MatrixXd& Ym,
                            const Eigen::MatrixXd& Yp) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Ym.transpose());
  Eigen::MatrixXd X = qr.solve(Yp.transpose()).transpose();
  const Eigen::MatrixXd R = Yp - X * Ym;
  X += qr.solve(R.transpose()).transpose();
  return X;
}

}  // namespace

AdEstimate estimate_Ad(const CovariancePair& cov, const PatternLabel& label,
                       const Eigen::MatrixXd& gamma) {
  const Eigen::Index dim = cov.sigma0.rows();
  if (gamma.rows() == 0 || dim % gamma.rows() != 0)
    throw DimensionError("Gamma dimension does not divide the state dimension");
  const int N = static_cast<int>(dim / gamma.rows());
  const Eigen::MatrixXd IG = kron_identity(N, gamma);
  const bool gamma_zero = gamma.cwiseAbs().maxCoeff() == 0.0;

  AdEstimate est;
  est.label = label.kind;

  Eigen::MatrixXd M, RHS;
  switch (label.kind) {
    case PatternKind::Constant:
      est.branch = "constant-deregularized";
      M = cov.sigma0 - IG;
      RHS = cov.sigma1;
      break;
    case PatternKind::LinearGrowth:
      est.branch = "differenced";
      if (!cov.differenced)
        throw DimensionError(
            "LinearGrowth estimation requires differenced covariances");
      M = cov.sigma0 - 2.0 * IG;
      RHS = cov.sigma1 + IG;
      break;
    case PatternKind::Other:
      est.branch = "plain";
      M = cov.sigma0;
      RHS = cov.sigma1;
      break;
  }

  est.condition = condition_number_2(M);
  if (!(est.condition < 1e12))
    throw SingularMatrixError(
        "estimator matrix is singular or ill-conditioned (cond = " +
            std::to_string(est.condition) + ")",
        est.condition);

  const bool plain_form =
      gamma_zero || label.kind == PatternKind::Other;
  if (plain_form && cov.has_stacks && !cov.differenced)
    est.Ad = solve_lstsq(cov.y_minus, cov.y_plus);
  else if (plain_form && cov.has_stacks && cov.differenced &&
           label.kind == PatternKind::LinearGrowth)
    est.Ad = solve_lstsq(cov.y_minus, cov.y_plus);
  else
    est.Ad = solve_right(RHS, M);
  return est;
}

}  // namespace netinfer
