#pragma once

#include <Eigen/Dense>

namespace netinfer {

/// Weighted directed graph given by its adjacency matrix. Entry (i,j) is the
/// weight of the edge from node j to node i; weights are nonnegative and the
/// diagonal is zero.
struct DirectedGraph {
  Eigen::MatrixXd adjacency;

  int n_nodes() const { return static_cast<int>(adjacency.rows()); }

  /// Throws DimensionError on a non-square matrix, negative weights or a
  /// nonzero diagonal.
  void validate() const;
};

/// L = diag(row sums of adjacency) - adjacency. Rows sum to zero.
Eigen::MatrixXd build_laplacian(const DirectedGraph& g);

}  // namespace netinfer
