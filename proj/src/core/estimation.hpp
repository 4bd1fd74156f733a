#pragma once

#include <string>

#include <Eigen/Dense>

#include "core/trajectory.hpp"

namespace netinfer {

enum class PatternKind { Constant, LinearGrowth, Other };

/// Trajectory growth-pattern classification from windowed first/second
/// difference magnitudes.
struct PatternLabel {
  PatternKind kind = PatternKind::Other;
  double eps1 = 0.0;
  double eps2 = 0.0;
  double threshold = 0.0;
  int window = 0;
};

/// eps1 = mean ||y(k+1)-y(k)|| and eps2 = mean ||y(k+1)-2y(k)+y(k-1)|| over
/// the trailing window; Constant iff eps1 <= threshold, LinearGrowth iff
/// eps1 > threshold and eps2 <= threshold.
PatternLabel classify_pattern(const Trajectory& traj, int window,
                              double threshold);

/// 3 * sqrt(2) * max sigma (three-sigma rule on a difference of two noises).
double default_threshold(const NoiseModel& noise);

/// Default trailing-window length min(50, T/5).
int default_window(long T);

/// Sample covariance and its one-lag version. `samples` is the paper's
/// normalizer T; the data stacks are kept so downstream estimators can use
/// the numerically equivalent least-squares form.
struct CovariancePair {
  Eigen::MatrixXd sigma0;
  Eigen::MatrixXd sigma1;
  long samples = 0;
  bool differenced = false;
  Eigen::MatrixXd y_minus;  // regressor stack backing sigma0/sigma1
  Eigen::MatrixXd y_plus;
  bool has_stacks = false;
};

/// Sigma0 = Y^-(Y^-)^T / T, Sigma1 = Y^+(Y^-)^T / T.
CovariancePair sample_covariances(const Trajectory& traj);

/// Same on first differences dy(t) = y(t+1)-y(t); keeps the 1/T normalizer
/// although the difference stacks have T-1 columns.
CovariancePair diff_covariances(const Trajectory& traj);

struct AdEstimate {
  Eigen::MatrixXd Ad;
  double condition = 0.0;  // of the inverted matrix
  std::string branch;      // "constant-deregularized" | "plain" | "differenced"
  PatternKind label = PatternKind::Other;
};

/// The closed-loop transition-matrix estimator:
///   Constant:      Sigma1 (Sigma0 - I_N (x) Gamma)^{-1}
///   LinearGrowth:  (Sigma_d1 + I (x) Gamma)(Sigma_d0 - 2 I (x) Gamma)^{-1}
///   Other:         Sigma1 Sigma0^{-1}
/// Inversions are linear solves, factored once. Throws SingularMatrixError
/// (with the condition number) when the matrix to invert has condition
/// >= 1e12; callers fall back to the constrained fit.
AdEstimate estimate_Ad(const CovariancePair& cov, const PatternLabel& label,
                       const Eigen::MatrixXd& gamma);

}  // namespace netinfer
