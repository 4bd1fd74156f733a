#include "core/system.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "core/errors.hpp"
#include "core/linalg.hpp"
#include "core/matrix_exp.hpp"

namespace netinfer {

void NodalSystem::validate() const {
  const auto nn = A.rows();
  if (A.cols() != nn) throw DimensionError("A must be square");
  if (B.rows() != nn) throw DimensionError("B must have n rows");
  if (K.cols() != nn || K.rows() != B.cols())
    throw DimensionError("K must be m x n with m = cols(B)");
  if (B.cols() > nn) throw DimensionError("m must not exceed n");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(B);
  const auto& s = svd.singularValues();
  if (s(s.size() - 1) <= 1e-12 * std::max(1.0, s(0)))
    throw DimensionError("B must have full column rank");
}

Eigen::MatrixXd closed_loop_matrix(const NodalSystem& sys,
                                   const Eigen::MatrixXd& L) {
  sys.validate();
  if (L.rows() != L.cols() || L.rows() < 1)
    throw DimensionError("L must be square");
  const int N = static_cast<int>(L.rows());
  const int n = sys.n();
  Eigen::MatrixXd Ac = Eigen::MatrixXd::Zero(N * n, N * n);
  const Eigen::MatrixXd BK = sys.B * sys.K;
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      Eigen::Ref<Eigen::MatrixXd> blk = Ac.block(i * n, j * n, n, n);
      blk = -L(i, j) * BK;
      if (i == j) blk += sys.A;
    }
  }
  return Ac;
}

Eigen::MatrixXd discretize(const Eigen::MatrixXd& Ac, double tau) {
  if (!(tau > 0.0)) throw DimensionError("sampling period must be positive");
  return matrix_exponential(Ac * tau);
}

ClosedLoop make_closed_loop(const NodalSystem& sys, const Eigen::MatrixXd& L,
                            double tau) {
  ClosedLoop cl;
  cl.Ac = closed_loop_matrix(sys, L);
  cl.Ad = discretize(cl.Ac, tau);
  cl.tau = tau;
  cl.n_nodes = static_cast<int>(L.rows());
  cl.state_dim = sys.n();
  return cl;
}

ConsensusReport check_consensus_stability(const NodalSystem& sys,
                                          const Eigen::MatrixXd& L) {
  sys.validate();
  Eigen::EigenSolver<Eigen::MatrixXd> es(L);
  if (es.info() != Eigen::Success)
    throw NonDiagonalizableError("eigendecomposition of L failed");

  const Eigen::VectorXcd lambdas = es.eigenvalues();
  const Eigen::MatrixXcd V = es.eigenvectors();

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(V);
  const auto& sv = svd.singularValues();
  const double cond = sv(0) / sv(sv.size() - 1);
  if (!(cond < 1e8))
    throw NonDiagonalizableError(
        "L is numerically non-diagonalizable (eigenvector condition " +
        std::to_string(cond) + ")");
  const double scale = std::max(1.0, lambdas.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < lambdas.size(); ++i)
    for (Eigen::Index j = i + 1; j < lambdas.size(); ++j)
      if (std::abs(lambdas(i) - lambdas(j)) < 1e-8 * scale)
        throw NonDiagonalizableError(
            "L has a repeated eigenvalue within tolerance; Jordan form "
            "assumed non-diagonal");

  Eigen::Index zero_idx = 0;
  lambdas.cwiseAbs().minCoeff(&zero_idx);

  ConsensusReport report;
  report.has_consensus_mode = std::abs(lambdas(zero_idx)) <= 1e-9 * scale;
  report.consensus = true;
  const Eigen::MatrixXcd BK = (sys.B * sys.K).cast<std::complex<double>>();
  const Eigen::MatrixXcd An = sys.A.cast<std::complex<double>>();
  for (Eigen::Index i = 0; i < lambdas.size(); ++i) {
    ConsensusReport::Mode mode;
    mode.lambda = lambdas(i);
    mode.is_consensus_mode = report.has_consensus_mode && i == zero_idx;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> mes(An - lambdas(i) * BK);
    mode.max_real_part = mes.eigenvalues().real().maxCoeff();
    mode.hurwitz = mode.max_real_part < 0.0;
    if (!mode.hurwitz && !mode.is_consensus_mode) report.consensus = false;
    report.modes.push_back(mode);
  }
  if (!report.has_consensus_mode) report.consensus = false;
  return report;
}

BenchmarkSystem six_node_benchmark_system() {
  BenchmarkSystem s;
  s.graph.adjacency.resize(6, 6);
  s.graph.adjacency << 0, 1, 0, 0, 0, 0,  //
      1, 0, 2, 0, 0, 0,                   //
      0, 2, 0, 1, 0, 0,                   //
      0, 0, 2, 0, 1, 0,                   //
      0, 0, 0, 3, 0, 1,                   //
      0, 0, 1, 0, 0, 0;
  s.nodal.A.resize(3, 3);
  s.nodal.A << -1, 2, 5,  //
      1, -1, 2,           //
      -5, 0, -1;
  s.nodal.B.resize(3, 1);
  s.nodal.B << 0, 0, 1;
  s.nodal.K.resize(1, 3);
  s.nodal.K << -0.0365, 0.4295, 0.9216;
  s.laplacian = build_laplacian(s.graph);
  return s;
}

}  // namespace netinfer
