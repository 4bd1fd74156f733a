#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "core/inverse_lq.hpp"
#include "core/system.hpp"
#include "core/trajectory.hpp"

namespace netinfer::testing {

/// Deterministic dense matrix with entries from the seeded Gaussian stream.
Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols,
                              std::uint64_t seed, double scale = 1.0);

/// Random Hurwitz nodal matrix (shifted so the spectral abscissa is
/// about -margin).
Eigen::MatrixXd random_hurwitz(int n, std::uint64_t seed,
                               double margin = 0.5);

/// Random connected weighted digraph on a ring plus extra edges; weights in
/// [0.5, 2].
netinfer::DirectedGraph random_connected_graph(int N, std::uint64_t seed,
                                               bool symmetric = false);

/// Random single-input system whose consensus stability is certified by a
/// Lyapunov design: K = B^T P0 with A^T P0 + P0 A < 0.
struct RandomSystem {
  netinfer::NodalSystem nodal;
  netinfer::DirectedGraph graph;
  Eigen::MatrixXd laplacian;
  Eigen::MatrixXd Ac;
};
RandomSystem random_consensus_system(int N, int n, std::uint64_t seed,
                                     bool symmetric_graph = false);

/// Forward-designed consensus-optimal LQ ground truth on a symmetric graph.
struct ForwardDesign {
  netinfer::NodalSystem nodal;
  Eigen::MatrixXd laplacian;  // symmetric
  netinfer::ConsensusLqDesign lq;
  Eigen::MatrixXd Ac;  // closed loop
};
ForwardDesign forward_designed_system(int N, int n, int m, std::uint64_t seed);

}  // namespace netinfer::testing
