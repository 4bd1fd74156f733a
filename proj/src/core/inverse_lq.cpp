#include "core/inverse_lq.hpp"

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "core/errors.hpp"
#include "core/linalg.hpp"
#include "core/lyapunov.hpp"
#include "core/matrix_exp.hpp"

namespace netinfer {

Eigen::VectorXd HSystem::apply_H(const Eigen::VectorXd& theta) const {
  const Eigen::Index d = S.rows();
  return S * theta.head(d) + theta.tail(d);
}

HSystem build_H(const Eigen::MatrixXd& A_hat, const Eigen::MatrixXd& B_hat,
                const Eigen::MatrixXd& L_hat, const Eigen::MatrixXd& K_hat,
                int N, int n) {
  if (A_hat.rows() != n || A_hat.cols() != n || L_hat.rows() != N ||
      L_hat.cols() != N || B_hat.rows() != n || K_hat.cols() != n ||
      K_hat.rows() != B_hat.cols())
    throw DimensionError("build_H: inconsistent factor shapes");
  HSystem sys;
  sys.N = N;
  sys.n = n;
  sys.m = static_cast<int>(B_hat.cols());
  sys.A_hat = A_hat;
  sys.B_hat = B_hat;
  sys.K_hat = K_hat;
  sys.L_hat = L_hat;
  sys.At = kron_identity(N, A_hat);
  sys.Bt = kron_identity(N, B_hat);
  sys.Kt = kron(L_hat, K_hat);
  const Eigen::Index Nn = static_cast<Eigen::Index>(N) * n;
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(Nn, Nn);
  // BtKt = L (x) (B K); invariant under the decoupling scale ambiguity.
  const Eigen::MatrixXd BtKt = kron(L_hat, B_hat * K_hat);
  sys.S = kron(I, sys.At.transpose()) + kron(sys.At.transpose(), I) -
          kron(BtKt.transpose(), I);
  return sys;
}

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Row-block-sum constraints sum_j M_{ij} = 0 as rows over vec(M)
// (column-major), for one (Nn x Nn) matrix.
MatrixXd rowsum_constraint_rows(int N, int n) {
  const Eigen::Index Nn = static_cast<Eigen::Index>(N) * n;
  const Eigen::Index d = Nn * Nn;
  MatrixXd C = MatrixXd::Zero(static_cast<Eigen::Index>(N) * n * n, d);
  Eigen::Index row = 0;
  for (int i = 0; i < N; ++i)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b, ++row)
        for (int j = 0; j < N; ++j)
          C(row, (static_cast<Eigen::Index>(j) * n + b) * Nn + i * n + a) =
              1.0;
  return C;
}

// Antisymmetry-killing constraints M_ab - M_ba = 0 for a < b.
MatrixXd symmetry_constraint_rows(Eigen::Index Nn) {
  const Eigen::Index d = Nn * Nn;
  MatrixXd C = MatrixXd::Zero(Nn * (Nn - 1) / 2, d);
  Eigen::Index row = 0;
  for (Eigen::Index a = 0; a < Nn; ++a)
    for (Eigen::Index b = a + 1; b < Nn; ++b, ++row) {
      C(row, b * Nn + a) = 1.0;
      C(row, a * Nn + b) = -1.0;
    }
  return C;
}

MatrixXd stack_two_blocks(const MatrixXd& C1) {
  // diag(C1, C1) over [vec P; vec Q]
  MatrixXd C = MatrixXd::Zero(2 * C1.rows(), 2 * C1.cols());
  C.topLeftCorner(C1.rows(), C1.cols()) = C1;
  C.bottomRightCorner(C1.rows(), C1.cols()) = C1;
  return C;
}

// Orthonormal basis of ker(C) through a complete QR of C^T.
MatrixXd nullspace_basis(const MatrixXd& C) {
  const MatrixXd Ct = C.transpose();
  Eigen::ColPivHouseholderQR<MatrixXd> qr(Ct);
  qr.setThreshold(1e-10);
  const Eigen::Index rank = qr.rank();
  const MatrixXd Qfull =
      qr.householderQ() * MatrixXd::Identity(Ct.rows(), Ct.rows());
  return Qfull.rightCols(Ct.rows() - rank);
}

// Projection of a (possibly asymmetric) square matrix onto
// { M : sym(M) >= delta * Pi } keeping the antisymmetric part.
MatrixXd project_psd_margin(const MatrixXd& M, const MatrixXd& Pi,
                            double delta) {
  const MatrixXd Sym = 0.5 * (M + M.transpose());
  const MatrixXd Anti = M - Sym;
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(Sym - delta * Pi);
  const VectorXd clipped = es.eigenvalues().cwiseMax(0.0);
  return delta * Pi +
         es.eigenvectors() * clipped.asDiagonal() *
             es.eigenvectors().transpose() +
         Anti;
}

double cone_violation_of(const MatrixXd& M) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (M + M.transpose()));
  return std::min(0.0, es.eigenvalues().minCoeff());
}

struct ThetaSplit {
  MatrixXd P, Q;
};

ThetaSplit split_theta(const VectorXd& theta, Eigen::Index Nn) {
  const Eigen::Index d = Nn * Nn;
  return {unvec(theta.head(d), Nn, Nn), unvec(theta.tail(d), Nn, Nn)};
}

VectorXd join_theta(const MatrixXd& P, const MatrixXd& Q) {
  VectorXd theta(P.size() + Q.size());
  theta << vec(P), vec(Q);
  return theta;
}

// Small nodal feasibility: symmetric P0 >= eps I and R_bar >= eps I with
// P0 B = K^T R_bar and A^T P0 + P0 A <= -eps_l I, by alternating
// projections. The parametrization runs over the upper triangles.
struct NodalSeed {
  MatrixXd P0;
  bool ok = false;
};

NodalSeed nodal_feasibility(const MatrixXd& A, const MatrixXd& B,
                            const MatrixXd& K) {
  NodalSeed seed;
  const int n = static_cast<int>(A.rows());
  const int m = static_cast<int>(B.cols());
  Eigen::EigenSolver<MatrixXd> es(A, false);
  if (es.eigenvalues().real().maxCoeff() >= 0.0) return seed;  // need Hurwitz

  const double anorm = std::max(1.0, spectral_norm(A));
  const double eps_pd = 1e-3;
  const double eps_lyap = 1e-3 * anorm;

  // Index maps for the symmetric parametrization.
  const int np = n * (n + 1) / 2, nr = m * (m + 1) / 2;
  auto pack = [&](const MatrixXd& P0, const MatrixXd& Rb) {
    VectorXd z(np + nr);
    int t = 0;
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b) z(t++) = P0(a, b);
    for (int a = 0; a < m; ++a)
      for (int b = a; b < m; ++b) z(t++) = Rb(a, b);
    return z;
  };
  auto unpack = [&](const VectorXd& z) {
    MatrixXd P0(n, n), Rb(m, m);
    int t = 0;
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b) P0(a, b) = P0(b, a) = z(t++);
    for (int a = 0; a < m; ++a)
      for (int b = a; b < m; ++b) Rb(a, b) = Rb(b, a) = z(t++);
    return std::make_pair(P0, Rb);
  };

  // Linear map of the coupling constraint P0 B - K^T Rb = 0 (n*m rows).
  MatrixXd Cz = MatrixXd::Zero(n * m, np + nr);
  for (int col = 0; col < np + nr; ++col) {
    VectorXd e = VectorXd::Zero(np + nr);
    e(col) = 1.0;
    auto [P0e, Rbe] = unpack(e);
    const MatrixXd res = P0e * B - K.transpose() * Rbe;
    Cz.col(col) = vec(res);
  }
  Eigen::CompleteOrthogonalDecomposition<MatrixXd> cod(Cz);

  MatrixXd P0 = MatrixXd::Identity(n, n);
  MatrixXd Rb = MatrixXd::Identity(m, m);
  for (int sweep = 0; sweep < 400; ++sweep) {
    // project onto the affine coupling set
    VectorXd z = pack(P0, Rb);
    z -= cod.solve(Cz * z);
    std::tie(P0, Rb) = unpack(z);
    // PSD floors
    {
      Eigen::SelfAdjointEigenSolver<MatrixXd> ep(P0);
      P0 = ep.eigenvectors() *
           ep.eigenvalues().cwiseMax(eps_pd).asDiagonal() *
           ep.eigenvectors().transpose();
      Eigen::SelfAdjointEigenSolver<MatrixXd> er(Rb);
      Rb = er.eigenvectors() *
           er.eigenvalues().cwiseMax(eps_pd).asDiagonal() *
           er.eigenvectors().transpose();
    }
    // Lyapunov negativity through the bijection P <-> A^T P + P A
    const MatrixXd W = A.transpose() * P0 + P0 * A;
    Eigen::SelfAdjointEigenSolver<MatrixXd> ew(W);
    const VectorXd wclip = ew.eigenvalues().cwiseMin(-eps_lyap);
    const MatrixXd Wc =
        ew.eigenvectors() * wclip.asDiagonal() * ew.eigenvectors().transpose();
    if ((Wc - W).norm() > 1e-14) {
      const MatrixXd dP = solve_lyapunov(A, -(Wc - W));
      P0 += 0.5 * (dP + dP.transpose());
    }
  }
  const double v1 = (P0 * B - K.transpose() * Rb).norm();
  const double v2 = -std::min(0.0, Eigen::SelfAdjointEigenSolver<MatrixXd>(P0)
                                       .eigenvalues()
                                       .minCoeff());
  const double v3 = std::max(
      0.0, Eigen::SelfAdjointEigenSolver<MatrixXd>(A.transpose() * P0 + P0 * A)
               .eigenvalues()
               .maxCoeff());
  const double scale = std::max(1.0, P0.norm());
  if (v1 < 1e-8 * scale && v2 < 1e-12 * scale && v3 <= 0.0) {
    seed.P0 = P0;
    seed.ok = true;
  }
  return seed;
}

}  // namespace

InverseLqResult solve_inverse_lq(const HSystem& sys, bool symmetric,
                                 const InverseLqConfig& cfg) {
  const Eigen::Index Nn = static_cast<Eigen::Index>(sys.N) * sys.n;
  const Eigen::Index d = Nn * Nn;
  MatrixXd H(d, 2 * d);
  H << sys.S, MatrixXd::Identity(d, d);

  MatrixXd C = stack_two_blocks(rowsum_constraint_rows(sys.N, sys.n));
  if (symmetric) {
    const MatrixXd Cs = stack_two_blocks(symmetry_constraint_rows(Nn));
    MatrixXd Call(C.rows() + Cs.rows(), C.cols());
    Call << C, Cs;
    C = std::move(Call);
  }

  // Feasible-subspace bases: affine only (for the least-sv start) and the
  // merged ker(H) cap affine subspace used by the feasibility sweeps.
  const MatrixXd G_affine = nullspace_basis(C);
  MatrixXd HC(H.rows() + C.rows(), 2 * d);
  HC << H, C;
  const MatrixXd G_kernel = nullspace_basis(HC);

  const MatrixXd Pi =
      MatrixXd::Identity(Nn, Nn) -
      kron(MatrixXd::Constant(sys.N, sys.N, 1.0 / sys.N),
           MatrixXd::Identity(sys.n, sys.n));

  // ---- candidate starts, in deterministic preference order ----
  std::vector<std::pair<std::string, VectorXd>> candidates;

  MatrixXd L_sym = 0.5 * (sys.L_hat + sys.L_hat.transpose());
  if (L_sym.trace() < 0.0) L_sym = -L_sym;
  const NodalSeed seed = nodal_feasibility(sys.A_hat, sys.B_hat, sys.K_hat);
  if (seed.ok) {
    const MatrixXd Pc = kron(L_sym, seed.P0);
    const VectorXd pvec = vec(Pc);
    VectorXd theta = join_theta(Pc, unvec(-(sys.S * pvec), Nn, Nn));
    const double nrm = theta.norm();
    if (nrm > 0) candidates.emplace_back("structured", theta / nrm);
  }
  {
    // least singular vector of H restricted to the affine subspace
    Eigen::BDCSVD<MatrixXd> svd(H * G_affine, Eigen::ComputeThinV);
    const VectorXd w = svd.matrixV().col(svd.matrixV().cols() - 1);
    VectorXd theta = G_affine * w;
    auto parts = split_theta(theta, Nn);
    if (parts.P.trace() < 0.0) theta = -theta;
    candidates.emplace_back("least-singular-vector", theta);
  }

  const double delta = cfg.delta_rel;
  VectorXd best_theta;
  double best_viol = std::numeric_limits<double>::infinity();
  std::string best_name;
  for (const auto& [name, start] : candidates) {
    VectorXd theta = start;
    double viol = std::numeric_limits<double>::infinity();
    for (int sweep = 0; sweep < cfg.feasibility_sweeps; ++sweep) {
      auto [P, Q] = split_theta(theta, Nn);
      P = project_psd_margin(P, Pi, delta);
      Q = project_psd_margin(Q, Pi, delta);
      theta = G_kernel * (G_kernel.transpose() * join_theta(P, Q));
      const double nrm = theta.norm();
      if (nrm < 1e-14) break;
      theta /= nrm;
      if (sweep % 25 == 24 || sweep == cfg.feasibility_sweeps - 1) {
        auto parts = split_theta(theta, Nn);
        viol = -std::min(cone_violation_of(parts.P),
                         cone_violation_of(parts.Q));
        if (viol < cfg.violation_tol) break;
      }
    }
    {
      auto parts = split_theta(theta, Nn);
      viol =
          -std::min(cone_violation_of(parts.P), cone_violation_of(parts.Q));
    }
    if (viol < best_viol) {
      best_viol = viol;
      best_theta = theta;
      best_name = name;
    }
    if (best_viol < cfg.violation_tol) break;
  }

  // ---- projected-gradient polish on the quadratic objective ----
  const double smax = spectral_norm(H);
  const double eta = 1.0 / (2.0 * smax * smax);
  VectorXd theta = best_theta;
  double best_obj = sys.apply_H(theta).squaredNorm();
  VectorXd best_polished = theta;
  for (int it = 0; it < cfg.gradient_iters; ++it) {
    const VectorXd r = sys.apply_H(theta);
    VectorXd grad(2 * d);
    grad.head(d) = sys.S.transpose() * r;
    grad.tail(d) = r;
    theta -= 2.0 * eta * grad;
    // Dykstra cycle over the PSD cones and the affine sets, renormalize last
    VectorXd p1 = VectorXd::Zero(2 * d), p2 = VectorXd::Zero(2 * d);
    for (int round = 0; round < 10; ++round) {
      VectorXd z = theta + p1;
      auto [P, Q] = split_theta(z, Nn);
      VectorXd y = join_theta(project_psd_margin(P, Pi, delta),
                              project_psd_margin(Q, Pi, delta));
      p1 = z - y;
      z = y + p2;
      VectorXd w = G_kernel * (G_kernel.transpose() * z);
      p2 = z - w;
      theta = w;
    }
    const double nrm = theta.norm();
    if (nrm < 1e-14) break;
    theta /= nrm;
    auto parts = split_theta(theta, Nn);
    const double viol =
        -std::min(cone_violation_of(parts.P), cone_violation_of(parts.Q));
    const double obj = sys.apply_H(theta).squaredNorm();
    if (viol <= std::max(best_viol, cfg.violation_tol) && obj <= best_obj) {
      best_obj = obj;
      best_polished = theta;
    }
  }
  theta = best_polished;

  InverseLqResult result;
  auto parts = split_theta(theta, Nn);
  if (symmetric) {
    parts.P = 0.5 * (parts.P + parts.P.transpose());
    parts.Q = 0.5 * (parts.Q + parts.Q.transpose());
  }
  result.P = parts.P;
  result.Q = parts.Q;
  result.kernel_residual = sys.apply_H(theta).norm();
  result.cone_violation =
      -std::min(cone_violation_of(parts.P), cone_violation_of(parts.Q));
  double rowsum = 0.0;
  for (int i = 0; i < sys.N; ++i) {
    MatrixXd sp = MatrixXd::Zero(sys.n, sys.n);
    MatrixXd sq = MatrixXd::Zero(sys.n, sys.n);
    for (int j = 0; j < sys.N; ++j) {
      sp += block_of(result.P, i, j, sys.n);
      sq += block_of(result.Q, i, j, sys.n);
    }
    rowsum = std::max({rowsum, sp.norm(), sq.norm()});
  }
  result.rowsum_residual = rowsum;
  result.feasible = result.cone_violation < 1e-8 && rowsum < 1e-8;
  result.init_used = best_name;
  if (!result.feasible && result.cone_violation > 1e-4)
    throw NoConvergenceError(
        "inverse-LQ projection cycle stalled; cone violation " +
        std::to_string(result.cone_violation));
  return result;
}

RRecovery recover_R(const Eigen::MatrixXd& Bt, const Eigen::MatrixXd& P,
                    const Eigen::MatrixXd& Kt) {
  if (Kt.cols() != Bt.rows() || P.rows() != Bt.rows())
    throw DimensionError("recover_R: inconsistent shapes");
  const MatrixXd Gm = Kt * Bt;  // Nm x Nm
  const MatrixXd X = Bt.transpose() * P * Bt;

  Eigen::JacobiSVD<MatrixXd> svd(Gm,
                                 Eigen::ComputeThinU | Eigen::ComputeThinV);
  const VectorXd& s = svd.singularValues();
  const double smax = s(0);
  const double smin = s(s.size() - 1);
  RRecovery rec;
  rec.condition = smin > 0 ? smax / smin
                           : std::numeric_limits<double>::infinity();

  MatrixXd R;
  if (rec.condition < 1e10) {
    R = Gm.transpose().partialPivLu().solve(X.transpose()).transpose();
  } else {
    Eigen::Index rank = 0;
    while (rank < s.size() && s(rank) > 1e-10 * smax) ++rank;
    if (rank == 0)
      throw SingularMatrixError("recover_R: Kt Bt vanishes", rec.condition);
    const MatrixXd Ur = svd.matrixU().leftCols(rank);
    const MatrixXd Vr = svd.matrixV().leftCols(rank);
    const VectorXd sinv = s.head(rank).cwiseInverse();
    const MatrixXd pinv = Vr * sinv.asDiagonal() * Ur.transpose();
    R = X * pinv;
    const MatrixXd proj_ker =
        MatrixXd::Identity(Gm.rows(), Gm.rows()) - Ur * Ur.transpose();
    rec.completion_value =
        std::abs(R.trace()) / static_cast<double>(rank);
    R += rec.completion_value * proj_ker;
    rec.kernel_completed = true;
  }
  rec.asymmetry = (R - R.transpose()).norm() / std::max(1.0, R.norm());
  rec.R = 0.5 * (R + R.transpose());
  rec.min_eigenvalue =
      Eigen::SelfAdjointEigenSolver<MatrixXd>(rec.R).eigenvalues().minCoeff();
  return rec;
}

double trajectory_equivalence(const Eigen::MatrixXd& Ac_a,
                              const Eigen::MatrixXd& Ac_b,
                              const Eigen::VectorXd& x0, double tau,
                              long steps) {
  if (Ac_a.rows() != Ac_b.rows() || x0.size() != Ac_a.rows())
    throw DimensionError("trajectory_equivalence: dimension mismatch");
  const MatrixXd Ad_a = matrix_exponential(Ac_a * tau);
  const MatrixXd Ad_b = matrix_exponential(Ac_b * tau);
  VectorXd xa = x0, xb = x0;
  const double scale = std::max(1.0, x0.norm());
  double dev = 0.0;
  for (long k = 0; k < steps; ++k) {
    xa = Ad_a * xa;
    xb = Ad_b * xb;
    dev = std::max(dev, (xa - xb).norm() / scale);
    if (!std::isfinite(dev)) break;
  }
  return dev;
}

ConsensusLqDesign design_consensus_lq(const Eigen::MatrixXd& A,
                                      const Eigen::MatrixXd& B,
                                      const Eigen::MatrixXd& L_sym,
                                      const Eigen::MatrixXd& C,
                                      const Eigen::MatrixXd& R0) {
  if ((L_sym - L_sym.transpose()).norm() > 1e-10 * std::max(1.0, L_sym.norm()))
    throw DimensionError("design_consensus_lq: L must be symmetric");
  const int N = static_cast<int>(L_sym.rows());
  ConsensusLqDesign d;
  d.P0 = solve_lyapunov(A, C);  // A^T P0 + P0 A = -C
  Eigen::LLT<MatrixXd> rchol(R0);
  if (rchol.info() != Eigen::Success)
    throw SingularMatrixError("design_consensus_lq: R0 must be PD", 0.0);
  d.K = rchol.solve(B.transpose() * d.P0);
  const MatrixXd M = d.P0 * B * rchol.solve(B.transpose()) * d.P0;
  d.Q = kron(L_sym, C) + kron(L_sym * L_sym, M);
  d.P = kron(L_sym, d.P0);
  d.R = kron_identity(N, R0);
  return d;
}

}  // namespace netinfer
