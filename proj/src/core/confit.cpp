#include "core/confit.hpp"

#include <cmath>

#include "core/errors.hpp"
#include "core/linalg.hpp"

namespace netinfer {

Eigen::MatrixXd project_spectral_ball(const Eigen::MatrixXd& M,
                                      double radius) {
  if (!(radius > 0.0)) throw DimensionError("radius must be positive");
  const Eigen::MatrixXd I =
      Eigen::MatrixXd::Identity(M.rows(), M.cols());
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      M - I, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Eigen::VectorXd s = svd.singularValues();
  if (s.size() == 0 || s(0) <= radius) return M;
  for (Eigen::Index i = 0; i < s.size(); ++i) s(i) = std::min(s(i), radius);
  return I + svd.matrixU() * s.asDiagonal() * svd.matrixV().transpose();
}

Eigen::MatrixXd project_block_equality(const Eigen::MatrixXd& M, int N,
                                       int n) {
  if (M.rows() != N * n || M.cols() != N * n)
    throw DimensionError("matrix must be (N n) x (N n)");
  Eigen::MatrixXd out = M;
  std::vector<Eigen::MatrixXd> rowsum(N);
  Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < N; ++i) {
    rowsum[i] = Eigen::MatrixXd::Zero(n, n);
    for (int j = 0; j < N; ++j) rowsum[i] += block_of(M, i, j, n);
    mean += rowsum[i];
  }
  mean /= N;
  for (int i = 0; i < N; ++i) {
    const Eigen::MatrixXd corr = (mean - rowsum[i]) / N;
    for (int j = 0; j < N; ++j) out.block(i * n, j * n, n, n) += corr;
  }
  return out;
}

namespace {

double equality_violation(const Eigen::MatrixXd& M, int N, int n) {
  std::vector<Eigen::MatrixXd> rowsum(N);
  Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < N; ++i) {
    rowsum[i] = Eigen::MatrixXd::Zero(n, n);
    for (int j = 0; j < N; ++j) rowsum[i] += block_of(M, i, j, n);
    mean += rowsum[i];
  }
  mean /= N;
  double v = 0.0;
  for (int i = 0; i < N; ++i) v = std::max(v, (rowsum[i] - mean).norm());
  return v;
}

// Dykstra's alternating projections onto {||A - I|| <= radius} and the
// block-equality affine set; ends with an exact ball projection so the norm
// constraint holds exactly on return.
Eigen::MatrixXd project_feasible(const Eigen::MatrixXd& M, int N, int n,
                                 double radius, int rounds) {
  Eigen::MatrixXd x = M;
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(M.rows(), M.cols());
  for (int r = 0; r < rounds; ++r) {
    const Eigen::MatrixXd y = project_spectral_ball(x + p, radius);
    p = x + p - y;
    x = project_block_equality(y, N, n);
    if ((x - y).norm() < 1e-13 * std::max(1.0, y.norm())) break;
  }
  return project_spectral_ball(x, radius);
}

}  // namespace

ConstrainedFitResult fit_Ad_constrained(const CovariancePair& cov,
                                        const Eigen::MatrixXd& gamma,
                                        const PatternLabel& label,
                                        const ConstrainedFitConfig& cfg) {
  if (!cov.sigma0.allFinite() || !cov.sigma1.allFinite())
    throw DimensionError("covariances must be finite");
  const Eigen::Index dim = cov.sigma0.rows();
  const int n = static_cast<int>(gamma.rows());
  if (n == 0 || dim % n != 0) throw DimensionError("bad Gamma dimension");
  const int N = static_cast<int>(dim / n);

  const Eigen::MatrixXd IG = kron_identity(N, gamma);
  const bool dereg = label.kind == PatternKind::Constant;
  const Eigen::MatrixXd M = dereg ? (cov.sigma0 - IG).eval() : cov.sigma0;
  const Eigen::MatrixXd& S1 = cov.sigma1;

  const auto objective = [&](const Eigen::MatrixXd& A) {
    return (S1 - A * M).squaredNorm();
  };

  // Start from the truncated-SVD least-squares point: solve on the
  // data-determined directions, identity on the numerically dead complement.
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      M, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double smax = sv.size() ? sv(0) : 0.0;
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > cfg.init_rcond * smax) ++rank;
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(dim, dim);
  if (rank > 0) {
    const Eigen::MatrixXd Ur = svd.matrixU().leftCols(rank);
    const Eigen::MatrixXd Vr = svd.matrixV().leftCols(rank);
    const Eigen::VectorXd sinv = sv.head(rank).cwiseInverse();
    A = S1 * Vr * sinv.asDiagonal() * Ur.transpose() +
        (Eigen::MatrixXd::Identity(dim, dim) - Ur * Ur.transpose());
  }
  A = project_feasible(A, N, n, cfg.radius, cfg.dykstra_rounds);

  ConstrainedFitResult result;
  result.objective_trace.reserve(64);
  const double base_step =
      cfg.step_scale / (2.0 * std::max(smax * smax, 1e-300));
  double f = objective(A);
  result.objective_trace.push_back(f);
  int it = 0;
  for (; it < cfg.max_iters; ++it) {
    const Eigen::MatrixXd grad = -2.0 * (S1 - A * M) * M.transpose();
    double step = base_step;
    Eigen::MatrixXd candidate;
    double fc = f;
    bool accepted = false;
    for (int bt = 0; bt < 30; ++bt) {
      candidate = project_feasible(A - step * grad, N, n, cfg.radius, 8);
      fc = objective(candidate);
      if (fc <= f) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    const double drop = f - fc;
    A = candidate;
    f = fc;
    result.objective_trace.push_back(f);
    if (drop <= cfg.tolerance * std::max(1.0, f)) {
      result.converged = true;
      break;
    }
  }
  result.converged = result.converged || it < cfg.max_iters;

  result.Ad = project_feasible(A, N, n, cfg.radius, cfg.dykstra_rounds);
  result.objective = objective(result.Ad);
  result.iterations = it;
  result.ball_violation =
      spectral_norm(result.Ad - Eigen::MatrixXd::Identity(dim, dim)) -
      cfg.radius;
  result.equality_violation = equality_violation(result.Ad, N, n);
  return result;
}

}  // namespace netinfer
