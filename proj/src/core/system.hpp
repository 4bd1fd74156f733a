#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "core/graph.hpp"

namespace netinfer {

/// Identical nodal dynamics (A, B) with state-feedback gain K. B must have
/// full column rank and m <= n.
struct NodalSystem {
  Eigen::MatrixXd A;  // n x n
  Eigen::MatrixXd B;  // n x m
  Eigen::MatrixXd K;  // m x n

  int n() const { return static_cast<int>(A.rows()); }
  int m() const { return static_cast<int>(B.cols()); }

  void validate() const;
};

/// Global closed-loop system: continuous matrix, its exact discretization
/// and the sampling period that links them.
struct ClosedLoop {
  Eigen::MatrixXd Ac;  // Nn x Nn
  Eigen::MatrixXd Ad;  // Nn x Nn, = exp(Ac * tau)
  double tau = 0.0;
  int n_nodes = 0;
  int state_dim = 0;
};

/// Ac = I_N (x) A  -  L (x) (B K).
Eigen::MatrixXd closed_loop_matrix(const NodalSystem& sys,
                                   const Eigen::MatrixXd& L);

/// Ad = exp(Ac * tau), tau > 0.
Eigen::MatrixXd discretize(const Eigen::MatrixXd& Ac, double tau);

/// Convenience: closed-loop matrix plus its discretization.
ClosedLoop make_closed_loop(const NodalSystem& sys, const Eigen::MatrixXd& L,
                            double tau);

/// Stability report for the per-eigenvalue decomposition A - lambda_i B K.
struct ConsensusReport {
  struct Mode {
    std::complex<double> lambda;  // eigenvalue of L
    double max_real_part;         // over eigenvalues of A - lambda B K
    bool hurwitz;
    bool is_consensus_mode;  // the (single) zero eigenvalue of L
  };
  std::vector<Mode> modes;
  bool has_consensus_mode = false;  // smallest-|lambda| eigenvalue <= 1e-9
  bool consensus = false;           // all non-consensus modes Hurwitz
};

/// Checks, for each eigenvalue of L, whether A - lambda B K is Hurwitz; the
/// zero eigenvalue is exempted as the consensus mode. Throws
/// NonDiagonalizableError when L fails the diagonal-Jordan-form test
/// (eigenvector condition number > 1e8 or an eigenvalue pair closer than
/// 1e-8).
ConsensusReport check_consensus_stability(const NodalSystem& sys,
                                          const Eigen::MatrixXd& L);

/// The six-node benchmark system used across tests and the CLI demos.
struct BenchmarkSystem {
  DirectedGraph graph;
  NodalSystem nodal;
  Eigen::MatrixXd laplacian;
};
BenchmarkSystem six_node_benchmark_system();

}  // namespace netinfer
