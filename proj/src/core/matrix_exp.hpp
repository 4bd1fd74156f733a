#pragma once

#include <Eigen/Dense>

namespace netinfer {

/// Dense matrix exponential by scaling-and-squaring with diagonal Pade
/// approximants of degree {3,5,7,9,13}, following Higham (2005).
/// Relative backward error is at machine-precision level for any input.
Eigen::MatrixXd matrix_exponential(const Eigen::MatrixXd& A);

}  // namespace netinfer
