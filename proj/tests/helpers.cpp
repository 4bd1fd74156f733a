#include "helpers.hpp"

#include <Eigen/Eigenvalues>

#include "core/graph.hpp"
#include "core/lyapunov.hpp"

namespace netinfer::testing {

Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols,
                              std::uint64_t seed, double scale) {
  GaussianSampler rng(seed);
  Eigen::MatrixXd M(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i)
      M(i, j) = scale * rng.standard_normal();
  return M;
}

Eigen::MatrixXd random_hurwitz(int n, std::uint64_t seed, double margin) {
  Eigen::MatrixXd A = random_matrix(n, n, seed);
  Eigen::EigenSolver<Eigen::MatrixXd> es(A, false);
  const double shift = es.eigenvalues().real().maxCoeff() + margin;
  A -= shift * Eigen::MatrixXd::Identity(n, n);
  return A;
}

DirectedGraph random_connected_graph(int N, std::uint64_t seed,
                                     bool symmetric) {
  GaussianSampler rng(seed);
  Eigen::MatrixXd adj = Eigen::MatrixXd::Zero(N, N);
  auto weight = [&] { return 0.5 + 1.5 * rng.uniform01(); };
  for (int i = 0; i < N; ++i) {
    const int j = (i + 1) % N;
    const double w = weight();
    adj(i, j) = w;
    adj(j, i) = symmetric ? w : weight();
  }
  // a few extra edges
  for (int extra = 0; extra < N / 2; ++extra) {
    const int i = static_cast<int>(rng.uniform01() * N) % N;
    const int j = static_cast<int>(rng.uniform01() * N) % N;
    if (i == j) continue;
    const double w = weight();
    adj(i, j) = w;
    if (symmetric) adj(j, i) = w;
  }
  return DirectedGraph{adj};
}

RandomSystem random_consensus_system(int N, int n, std::uint64_t seed,
                                     bool symmetric_graph) {
  RandomSystem sys;
  sys.graph = random_connected_graph(N, seed, symmetric_graph);
  sys.laplacian = build_laplacian(sys.graph);
  sys.nodal.A = random_hurwitz(n, seed + 1);
  sys.nodal.B = random_matrix(n, 1, seed + 2);
  // Lyapunov-certified gain: V = x^T P0 x decreases for every lambda >= 0
  Eigen::MatrixXd C = random_matrix(n, n, seed + 3);
  C = (C * C.transpose() + Eigen::MatrixXd::Identity(n, n)).eval();
  const Eigen::MatrixXd P0 = solve_lyapunov(sys.nodal.A, C);
  sys.nodal.K = (sys.nodal.B.transpose() * P0).eval();
  sys.Ac = closed_loop_matrix(sys.nodal, sys.laplacian);
  return sys;
}

ForwardDesign forward_designed_system(int N, int n, int m,
                                      std::uint64_t seed) {
  ForwardDesign d;
  const DirectedGraph g = random_connected_graph(N, seed, /*symmetric=*/true);
  d.laplacian = build_laplacian(g);
  d.nodal.A = random_hurwitz(n, seed + 11);
  d.nodal.B = random_matrix(n, m, seed + 12);
  Eigen::MatrixXd C = random_matrix(n, n, seed + 13);
  C = (C * C.transpose() + 0.5 * Eigen::MatrixXd::Identity(n, n)).eval();
  GaussianSampler rng(seed + 14);
  const Eigen::MatrixXd R0 =
      (0.5 + 1.5 * rng.uniform01()) * Eigen::MatrixXd::Identity(m, m);
  d.lq = design_consensus_lq(d.nodal.A, d.nodal.B, d.laplacian, C, R0);
  d.nodal.K = d.lq.K;
  d.Ac = closed_loop_matrix(d.nodal, d.laplacian);
  return d;
}

}  // namespace netinfer::testing
