#pragma once

#include <optional>
#include <string>

#include <Eigen/Dense>

#include "core/confit.hpp"
#include "core/decouple.hpp"
#include "core/estimation.hpp"
#include "core/inverse_lq.hpp"
#include "core/matlog.hpp"
#include "core/trajectory.hpp"

namespace netinfer {

struct PipelineOptions {
  std::string pattern = "auto";  // auto | constant | linear | other
  bool force_constrained = false;
  double threshold = -1.0;  // < 0: derive from the noise model
  int window = -1;          // < 0: default window
  int n_inputs = 1;
  std::uint64_t seed = 0;   // Laplacian-projection perturbation stream
  bool run_inverse_lq = false;
  bool symmetric_cost = true;
  ConstrainedFitConfig confit;
  ThresholdConfig thresholds;
};

/// Everything the inference stack produced for one trajectory, with
/// per-stage diagnostics. Stages after a failed one are left empty.
struct InferenceReport {
  PatternLabel label;
  AdEstimate ad;                 // always one of the two paths below
  bool used_constrained = false;
  ConstrainedFitResult confit;
  std::optional<AcRecovery> ac;
  std::optional<DecoupleResult> factors;
  std::optional<InverseLqResult> lq;
  std::optional<RRecovery> r_recovery;
  std::string failure;  // first hard failure, empty on success
};

/// estimate -> constrained-fit fallback -> matrix log -> decoupling
/// [-> inverse LQ]. The constrained fit replaces the raw estimate when the
/// estimator errors out or its result leaves the log's convergence ball.
InferenceReport run_inference(const Trajectory& traj,
                              const Eigen::MatrixXd& gamma,
                              const PipelineOptions& opts);

}  // namespace netinfer
