#include <catch2/catch_amalgamated.hpp>

#include "core/confit.hpp"
#include "core/linalg.hpp"
#include "core/metrics.hpp"
#include "core/system.hpp"
#include "helpers.hpp"

using namespace netinfer;
using netinfer::testing::random_consensus_system;
using netinfer::testing::random_matrix;
using Catch::Approx;

namespace {

double equality_violation(const Eigen::MatrixXd& M, int N, int n) {
  Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(n, n);
  std::vector<Eigen::MatrixXd> sums(N, Eigen::MatrixXd::Zero(n, n));
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) sums[i] += block_of(M, i, j, n);
    mean += sums[i];
  }
  mean /= N;
  double v = 0.0;
  for (int i = 0; i < N; ++i) v = std::max(v, (sums[i] - mean).norm());
  return v;
}

}  // namespace

TEST_CASE("spectral-ball projection", "[confit]") {
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(5, 5);

  SECTION("points inside the ball are fixed") {
    const Eigen::MatrixXd M = I + 0.3 * random_matrix(5, 5, 1, 0.1);
    CHECK((project_spectral_ball(M, 1.0) - M).norm() == 0.0);
  }
  SECTION("a rank-one excess is clipped to the radius") {
    Eigen::VectorXd u = random_matrix(5, 1, 2);
    Eigen::VectorXd v = random_matrix(5, 1, 3);
    u.normalize();
    v.normalize();
    const Eigen::MatrixXd M = I + 2.0 * u * v.transpose();
    const Eigen::MatrixXd proj = project_spectral_ball(M, 1.0);
    CHECK((proj - (I + u * v.transpose())).norm() < 1e-12);
  }
  SECTION("projection is the Frobenius-nearest feasible point") {
    const Eigen::MatrixXd M = Eigen::MatrixXd::Identity(30, 30) +
                              random_matrix(30, 30, 4, 0.3);
    const Eigen::MatrixXd proj = project_spectral_ball(M, 0.9);
    CHECK(spectral_norm(proj - Eigen::MatrixXd::Identity(30, 30)) ==
          Approx(0.9).epsilon(1e-9));
    // oracle: no sampled feasible point lies closer
    const double dist = (proj - M).norm();
    for (std::uint64_t s = 0; s < 200; ++s) {
      const Eigen::MatrixXd other = project_spectral_ball(
          M + random_matrix(30, 30, 100 + s, 0.2), 0.9);
      CHECK((other - M).norm() >= dist - 1e-9);
    }
  }
  SECTION("idempotence") {
    const Eigen::MatrixXd M =
        Eigen::MatrixXd::Identity(6, 6) + random_matrix(6, 6, 5, 1.0);
    const Eigen::MatrixXd p1 = project_spectral_ball(M, 0.7);
    CHECK((project_spectral_ball(p1, 0.7) - p1).norm() < 1e-12);
  }
}

TEST_CASE("block-equality projection", "[confit]") {
  SECTION("hand-checked two-node example") {
    Eigen::MatrixXd M(2, 2);
    M << 1, 0, 0, 3;
    Eigen::MatrixXd expected(2, 2);
    expected << 1.5, 0.5, -0.5, 3.5;
    CHECK((project_block_equality(M, 2, 1) - expected).norm() < 1e-14);
  }
  SECTION("consistent matrices are fixed points") {
    const auto sys = random_consensus_system(4, 2, 6);
    const Eigen::MatrixXd Ad =
        discretize(sys.Ac, 0.3 / spectral_norm(sys.Ac));
    CHECK((project_block_equality(Ad, 4, 2) - Ad).norm() <
          1e-12 * Ad.norm());
  }
  SECTION("output always satisfies the constraint, and is idempotent") {
    const Eigen::MatrixXd M = random_matrix(12, 12, 7);
    const Eigen::MatrixXd proj = project_block_equality(M, 4, 3);
    CHECK(equality_violation(proj, 4, 3) < 1e-12 * std::max(1.0, M.norm()));
    CHECK((project_block_equality(proj, 4, 3) - proj).norm() < 1e-12);
  }
}

TEST_CASE("constrained fit", "[confit]") {
  SECTION("noiseless feasible data is recovered") {
    const auto sys = random_consensus_system(3, 1, 9);
    const double tau = 0.3 / spectral_norm(sys.Ac);
    const ClosedLoop cl = make_closed_loop(sys.nodal, sys.laplacian, tau);
    REQUIRE(spectral_norm(cl.Ad - Eigen::MatrixXd::Identity(3, 3)) < 1.0);
    NoiseModel quiet;
    quiet.sigma = Eigen::VectorXd::Zero(1);
    const Trajectory traj = simulate(
        cl, random_matrix(3, 1, 10, 100.0), 40, quiet, 0);
    PatternLabel label;
    label.kind = PatternKind::Other;
    const ConstrainedFitResult fit = fit_Ad_constrained(
        sample_covariances(traj), Eigen::MatrixXd::Zero(1, 1), label);
    CHECK(error_metric(fit.Ad, cl.Ad, false).er < 1e-6);
  }

  SECTION("an infeasible optimum activates the ball constraint") {
    // discretize far beyond the log bound so ||Ad - I|| > 1
    const auto sys = random_consensus_system(3, 2, 12);
    const double tau = 2.5 / spectral_norm(sys.Ac);
    const ClosedLoop cl = make_closed_loop(sys.nodal, sys.laplacian, tau);
    REQUIRE(spectral_norm(cl.Ad - Eigen::MatrixXd::Identity(6, 6)) > 1.0);
    NoiseModel quiet;
    quiet.sigma = Eigen::VectorXd::Zero(2);
    const Trajectory traj =
        simulate(cl, random_matrix(6, 1, 13, 50.0), 40, quiet, 0);
    PatternLabel label;
    label.kind = PatternKind::Other;
    const ConstrainedFitResult fit = fit_Ad_constrained(
        sample_covariances(traj), Eigen::MatrixXd::Zero(2, 2), label);
    CHECK(spectral_norm(fit.Ad - Eigen::MatrixXd::Identity(6, 6)) <=
          1.0 - 1e-9 + 1e-12);
    CHECK(equality_violation(fit.Ad, 3, 2) < 1e-8);
  }

  SECTION("objective is non-increasing across accepted iterations") {
    const BenchmarkSystem bench = six_node_benchmark_system();
    const ClosedLoop cl = make_closed_loop(bench.nodal, bench.laplacian, 0.05);
    NoiseModel noise;
    noise.sigma.resize(3);
    noise.sigma << 1.0, 0.5, 0.1;
    const Trajectory traj = simulate(
        cl, 500.0 * Eigen::VectorXd::Ones(18), 100, noise, 3);
    PatternLabel label;
    label.kind = PatternKind::Constant;
    ConstrainedFitConfig cfg;
    cfg.max_iters = 120;
    const ConstrainedFitResult fit =
        fit_Ad_constrained(sample_covariances(traj), noise.gamma(), label, cfg);
    REQUIRE(fit.objective_trace.size() > 1);
    for (std::size_t i = 1; i < fit.objective_trace.size(); ++i)
      CHECK(fit.objective_trace[i] <= fit.objective_trace[i - 1] * (1 + 1e-14));
    CHECK(equality_violation(fit.Ad, 6, 3) < 1e-8);
    CHECK(spectral_norm(fit.Ad - Eigen::MatrixXd::Identity(18, 18)) <=
          1.0 - 1e-9 + 1e-12);
  }
}
