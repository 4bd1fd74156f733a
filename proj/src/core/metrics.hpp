#pragma once

#include <Eigen/Dense>

#include "core/linalg.hpp"

namespace netinfer {

/// Relative Frobenius error after optimal scalar alignment:
/// Er = ||gamma * estimate - truth||_F / ||truth||_F with
/// gamma = <estimate, truth>_F / ||estimate||_F^2 when allow_scale.
struct ErrorMetric {
  double er = 0.0;
  double gamma = 1.0;
  bool degenerate = false;  // zero estimate under allow_scale
};

ErrorMetric error_metric(const Eigen::MatrixXd& estimate,
                         const Eigen::MatrixXd& truth, bool allow_scale);

}  // namespace netinfer
