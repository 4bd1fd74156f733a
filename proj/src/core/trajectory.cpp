#include "core/trajectory.hpp"

#include <cmath>

#include "core/errors.hpp"

namespace netinfer {

double GaussianSampler::uniform01() {
  // 53-bit mantissa in (0, 1]; keeps log() finite in the transform below.
  const std::uint64_t r = engine_();
  return 1.0 - static_cast<double>(r >> 11) * 0x1.0p-53;
}

double GaussianSampler::standard_normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  const double u1 = uniform01();
  const double u2 = uniform01();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * M_PI * u2;
  spare_ = radius * std::sin(angle);
  have_spare_ = true;
  return radius * std::cos(angle);
}

Trajectory simulate(const ClosedLoop& cl, const Eigen::VectorXd& x0, long T,
                    const NoiseModel& noise, std::uint64_t seed) {
  const Eigen::Index dim = cl.Ad.rows();
  if (x0.size() != dim) throw DimensionError("x0 has wrong dimension");
  if (T < 1) throw DimensionError("horizon must be at least 1");
  if (!x0.allFinite()) throw DimensionError("x0 must be finite");
  if (noise.sigma.size() != cl.state_dim &&
      !(noise.sigma.size() == 0))
    throw DimensionError("noise sigma must have one entry per state dim");

  Trajectory traj;
  traj.tau = cl.tau;
  traj.n_nodes = cl.n_nodes;
  traj.state_dim = cl.state_dim;
  traj.seed = seed;
  traj.noise = noise;
  traj.observations.resize(dim, T + 1);

  GaussianSampler rng(seed);
  Eigen::VectorXd sigma_full(dim);
  for (int i = 0; i < cl.n_nodes; ++i)
    for (int l = 0; l < cl.state_dim; ++l)
      sigma_full(i * cl.state_dim + l) =
          noise.sigma.size() ? noise.sigma(l) : 0.0;

  Eigen::VectorXd x = x0;
  for (long k = 0; k <= T; ++k) {
    if (k > 0) {
      x = cl.Ad * x;
      if (!(x.cwiseAbs().maxCoeff() < 1e300))
        throw OverflowError("state overflow at step " + std::to_string(k), k);
    }
    Eigen::VectorXd y = x;
    for (Eigen::Index d = 0; d < dim; ++d)
      if (sigma_full(d) > 0.0) y(d) += sigma_full(d) * rng.standard_normal();
    traj.observations.col(k) = y;
  }
  return traj;
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> stack_matrices(
    const Trajectory& traj) {
  const long T = traj.horizon();
  if (T < 1) throw DimensionError("trajectory must contain at least 2 samples");
  return {traj.observations.leftCols(T), traj.observations.rightCols(T)};
}

}  // namespace netinfer
