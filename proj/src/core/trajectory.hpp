#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "core/system.hpp"

namespace netinfer {

/// Per-dimension observation-noise standard deviations; the covariance
/// Gamma = diag(sigma^2) is replicated across nodes as I_N (x) Gamma.
struct NoiseModel {
  Eigen::VectorXd sigma;

  Eigen::MatrixXd gamma() const {
    return sigma.array().square().matrix().asDiagonal();
  }
  bool is_zero() const { return sigma.size() == 0 || sigma.maxCoeff() == 0.0; }
};

/// Gaussian stream: mt19937_64 driving a Box-Muller transform. The
/// generator name is recorded in every Trajectory so runs can be replayed.
class GaussianSampler {
 public:
  explicit GaussianSampler(std::uint64_t seed) : engine_(seed) {}

  double standard_normal();
  double uniform01();  // in (0, 1]

  static const char* algorithm() { return "mt19937_64/box-muller"; }

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// Discrete noisy observations y(0..T) of one closed-loop run.
struct Trajectory {
  double tau = 0.0;
  int n_nodes = 0;
  int state_dim = 0;
  std::uint64_t seed = 0;
  NoiseModel noise;
  std::string rng = GaussianSampler::algorithm();
  Eigen::MatrixXd observations;  // (Nn) x (T+1); column k is y(k)

  long horizon() const { return observations.cols() - 1; }
  Eigen::Index dim() const { return observations.rows(); }
};

/// x(k+1) = Ad x(k); y(k) = x(k) + v(k) with v i.i.d. N(0, I_N (x) Gamma).
/// Throws OverflowError when a state component passes 1e300.
Trajectory simulate(const ClosedLoop& cl, const Eigen::VectorXd& x0, long T,
                    const NoiseModel& noise, std::uint64_t seed);

/// (Y^-, Y^+): columns y(0..T-1) and y(1..T).
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> stack_matrices(
    const Trajectory& traj);

}  // namespace netinfer
