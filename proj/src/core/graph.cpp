#include "core/graph.hpp"

#include "core/errors.hpp"

namespace netinfer {

void DirectedGraph::validate() const {
  if (adjacency.rows() != adjacency.cols() || adjacency.rows() < 1)
    throw DimensionError("adjacency matrix must be square and non-empty");
  for (Eigen::Index i = 0; i < adjacency.rows(); ++i) {
    if (adjacency(i, i) != 0.0)
      throw DimensionError("adjacency diagonal must be zero");
    for (Eigen::Index j = 0; j < adjacency.cols(); ++j)
      if (adjacency(i, j) < 0.0)
        throw DimensionError("adjacency weights must be nonnegative");
  }
}

Eigen::MatrixXd build_laplacian(const DirectedGraph& g) {
  g.validate();
  Eigen::VectorXd degrees = g.adjacency.rowwise().sum();
  Eigen::MatrixXd L = -g.adjacency;
  L.diagonal() += degrees;
  return L;
}

}  // namespace netinfer
