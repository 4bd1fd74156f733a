#include "core/metrics.hpp"

#include <cmath>

#include "core/errors.hpp"

namespace netinfer {

Eigen::MatrixXd kron(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
  Eigen::MatrixXd out(A.rows() * B.rows(), A.cols() * B.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j)
      out.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
  return out;
}

double spectral_norm(const Eigen::MatrixXd& M) {
  return M.jacobiSvd().singularValues()(0);
}

double condition_number_2(const Eigen::MatrixXd& M) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
  const auto& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  if (smin == 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / smin;
}

Eigen::VectorXd vec(const Eigen::MatrixXd& M) {
  return Eigen::Map<const Eigen::VectorXd>(M.data(), M.size());
}

Eigen::MatrixXd unvec(const Eigen::VectorXd& v, Eigen::Index rows,
                      Eigen::Index cols) {
  return Eigen::Map<const Eigen::MatrixXd>(v.data(), rows, cols);
}

Eigen::MatrixXd kron_identity(int N, const Eigen::MatrixXd& M) {
  Eigen::MatrixXd out =
      Eigen::MatrixXd::Zero(N * M.rows(), N * M.cols());
  for (int i = 0; i < N; ++i)
    out.block(i * M.rows(), i * M.cols(), M.rows(), M.cols()) = M;
  return out;
}

ErrorMetric error_metric(const Eigen::MatrixXd& estimate,
                         const Eigen::MatrixXd& truth, bool allow_scale) {
  if (estimate.rows() != truth.rows() || estimate.cols() != truth.cols())
    throw DimensionError("error_metric: shape mismatch");
  const double truth_norm = truth.norm();
  if (truth_norm == 0.0)
    throw DimensionError("error_metric: reference matrix is zero");
  ErrorMetric r;
  r.gamma = 1.0;
  r.degenerate = false;
  if (allow_scale) {
    const double denom = estimate.squaredNorm();
    if (denom == 0.0) {
      // gamma undefined; by convention the error of the zero estimate is 1
      r.degenerate = true;
      r.er = 1.0;
      return r;
    }
    r.gamma = (estimate.array() * truth.array()).sum() / denom;
  }
  r.er = (r.gamma * estimate - truth).norm() / truth_norm;
  return r;
}

}  // namespace netinfer
