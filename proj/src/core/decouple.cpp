#include "core/decouple.hpp"

#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>

#include "core/errors.hpp"
#include "core/linalg.hpp"
#include "core/trajectory.hpp"

namespace netinfer {

Eigen::MatrixXd extract_A(const Eigen::MatrixXd& Ac, int N, int n) {
  if (Ac.rows() != N * n || Ac.cols() != N * n)
    throw DimensionError("Ac must be (N n) x (N n)");
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) A += block_of(Ac, i, j, n);
  return A / N;
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> compute_W_Z(
    const Eigen::MatrixXd& Ac, const Eigen::MatrixXd& A_hat) {
  const int n = static_cast<int>(A_hat.rows());
  if (Ac.rows() % n != 0) throw DimensionError("inconsistent shapes");
  const int N = static_cast<int>(Ac.rows() / n);
  const Eigen::MatrixXd W = kron_identity(N, A_hat) - Ac;
  Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < N; ++i) {
    Z += block_of(W, i, i, n);
    for (int j = 0; j < N; ++j)
      if (j != i) Z -= block_of(W, i, j, n);
  }
  Z /= 2.0 * N;
  return {W, Z};
}

namespace {

std::vector<std::pair<int, int>> retained_indices(const Eigen::MatrixXd& Z,
                                                  double eps_z) {
  std::vector<std::pair<int, int>> idx;
  for (int l1 = 0; l1 < Z.rows(); ++l1)
    for (int l2 = 0; l2 < Z.cols(); ++l2)
      if (std::abs(Z(l1, l2)) > eps_z) idx.emplace_back(l1, l2);
  return idx;
}

}  // namespace

Eigen::MatrixXd surrogate_L(const Eigen::MatrixXd& W, const Eigen::MatrixXd& Z,
                            int N, int n, const ThresholdConfig& cfg) {
  const double eps_z = cfg.eps_z_rel * Z.cwiseAbs().maxCoeff();
  const auto idx = retained_indices(Z, eps_z);
  if (idx.empty())
    throw EmptyIndexSetError("all entries of Z are below the threshold");
  Eigen::MatrixXd Lt(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      double acc = 0.0;
      for (const auto& [l1, l2] : idx)
        acc += W(i * n + l1, j * n + l2) / Z(l1, l2);
      Lt(i, j) = acc / static_cast<double>(idx.size());
    }
  return Lt;
}

namespace {

void project_row_sums(Eigen::MatrixXd& L) {
  const int N = static_cast<int>(L.rows());
  const Eigen::VectorXd means = L.rowwise().sum() / N;
  L.colwise() -= means;
}

void project_offdiag_sign(Eigen::MatrixXd& L) {
  for (Eigen::Index i = 0; i < L.rows(); ++i)
    for (Eigen::Index j = 0; j < L.cols(); ++j)
      if (i != j && L(i, j) > 0.0) L(i, j) = 0.0;
}

bool spectrum_is_simple(const Eigen::MatrixXd& L, double gap) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(L, /*computeEigenvectors=*/false);
  const Eigen::VectorXcd ev = es.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    for (Eigen::Index j = i + 1; j < ev.size(); ++j)
      if (std::abs(ev(i) - ev(j)) <= gap) return false;
  return true;
}

}  // namespace

LaplacianProjection project_laplacian(const Eigen::MatrixXd& L_tilde,
                                      const ThresholdConfig& cfg) {
  if (L_tilde.rows() != L_tilde.cols())
    throw DimensionError("surrogate must be square");
  const int N = static_cast<int>(L_tilde.rows());

  LaplacianProjection out;
  // The surrogate inherits the sign of s_L; fix the global sign so the mean
  // diagonal is positive before imposing the off-diagonal sign constraint.
  Eigen::MatrixXd target = L_tilde;
  if (target.trace() < 0.0) {
    target = -target;
    out.sign_flipped = true;
  }

  GaussianSampler rng(cfg.seed);
  const double perturb = cfg.perturb_rel * L_tilde.norm() / N;
  Eigen::MatrixXd L = target;
  Eigen::MatrixXd prev = target;
  for (int t = 1; t <= cfg.t_bar; ++t) {
    out.outer_rounds = t;
    for (int k = 0; k < cfg.k_bar; ++k) {
      L -= cfg.alpha * 2.0 * (L - target);
      project_row_sums(L);
      project_offdiag_sign(L);
    }
    // finish with alternating projections so both constraints hold at once
    for (int k = 0; k < 1000; ++k) {
      project_row_sums(L);
      project_offdiag_sign(L);
      if ((L.rowwise().sum()).cwiseAbs().maxCoeff() <
          1e-10 * std::max(1.0, L.norm()))
        break;
    }
    const bool converged = t == 1 || (L - prev).norm() <= cfg.eps_L ||
                           spectrum_is_simple(L, cfg.eigengap);
    if (converged && spectrum_is_simple(L, cfg.eigengap)) {
      out.simple = true;
      break;
    }
    prev = L;
    for (Eigen::Index i = 0; i < L.rows(); ++i)
      for (Eigen::Index j = 0; j < L.cols(); ++j)
        L(i, j) += perturb * rng.standard_normal();
    target = L;
  }
  if (!out.simple) out.simple = spectrum_is_simple(L, cfg.eigengap);
  out.L = L;
  out.row_sum_residual = L.rowwise().sum().cwiseAbs().maxCoeff();
  return out;
}

Eigen::VectorXd extract_B_single(const Eigen::MatrixXd& Z,
                                 const ThresholdConfig& cfg) {
  const int n = static_cast<int>(Z.rows());
  const double eps_z = cfg.eps_z_rel * Z.cwiseAbs().maxCoeff();
  const auto idx = retained_indices(Z, eps_z);
  if (idx.empty())
    throw EmptyIndexSetError("all entries of Z are below the threshold");
  Eigen::Index ld = 0, ld2 = 0;
  Z.cwiseAbs().maxCoeff(&ld, &ld2);
  std::vector<int> cols;
  for (int l2 = 0; l2 < n; ++l2)
    if (std::abs(Z(ld, l2)) > eps_z) cols.push_back(l2);
  if (cols.empty())
    throw EmptyIndexSetError("anchor row of Z has no entries above threshold");
  Eigen::VectorXd B(n);
  for (int l1 = 0; l1 < n; ++l1) {
    double acc = 0.0;
    for (int l2 : cols) acc += Z(l1, l2) / Z(ld, l2);
    B(l1) = acc / static_cast<double>(cols.size());
  }
  B(ld) = 1.0;  // exact by construction; rewrite to kill rounding
  return B;
}

Eigen::RowVectorXd extract_K_single(const Eigen::VectorXd& B,
                                    const Eigen::MatrixXd& Z) {
  const double denom = B.squaredNorm();
  if (denom == 0.0) throw DimensionError("B estimate is zero");
  return (B.transpose() * Z) / denom;
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> factor_BK_svd(
    const Eigen::MatrixXd& Z, int m) {
  const int n = static_cast<int>(Z.rows());
  if (m < 1 || m > n) throw DimensionError("need 1 <= m <= n");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      Z, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  if (s(m - 1) < 1e-10 * s(0))
    throw SingularMatrixError("Z has effective rank below m",
                              s(0) / std::max(s(m - 1), 1e-300));
  const Eigen::VectorXd root = s.head(m).cwiseSqrt();
  Eigen::MatrixXd B = svd.matrixU().leftCols(m) * root.asDiagonal();
  Eigen::MatrixXd K = root.asDiagonal() * svd.matrixV().leftCols(m).transpose();
  return {B, K};
}

DecoupleResult decouple(const Eigen::MatrixXd& Ac, int N, int n, int m,
                        const ThresholdConfig& cfg) {
  DecoupleResult r;
  r.A_hat = extract_A(Ac, N, n);
  std::tie(r.W, r.Z) = compute_W_Z(Ac, r.A_hat);
  r.L_tilde = surrogate_L(r.W, r.Z, N, n, cfg);
  const LaplacianProjection proj = project_laplacian(r.L_tilde, cfg);
  r.L_hat = proj.L;
  r.laplacian_simple = proj.simple;
  r.outer_rounds = proj.outer_rounds;
  if (m == 1) {
    r.B_hat = extract_B_single(r.Z, cfg);
    r.K_hat = extract_K_single(r.B_hat, r.Z);
  } else {
    std::tie(r.B_hat, r.K_hat) = factor_BK_svd(r.Z, m);
  }
  return r;
}

}  // namespace netinfer
