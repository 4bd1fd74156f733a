#include <catch2/catch_amalgamated.hpp>

#include <unsupported/Eigen/MatrixFunctions>

#include "core/errors.hpp"
#include "core/graph.hpp"
#include "core/linalg.hpp"
#include "core/matrix_exp.hpp"
#include "core/system.hpp"
#include "helpers.hpp"

using namespace netinfer;
using netinfer::testing::random_consensus_system;
using netinfer::testing::random_matrix;
using Catch::Approx;

TEST_CASE("laplacian of the six-node benchmark graph", "[system]") {
  const BenchmarkSystem sys = six_node_benchmark_system();
  const Eigen::MatrixXd L = sys.laplacian;

  // independent arithmetic oracle: diagonal = row sums of the adjacency
  for (int i = 0; i < 6; ++i)
    CHECK(L(i, i) == Approx(sys.graph.adjacency.row(i).sum()));
  Eigen::VectorXd expected_diag(6);
  expected_diag << 1, 3, 3, 3, 4, 1;
  CHECK((L.diagonal() - expected_diag).norm() == 0.0);
  CHECK(L.rowwise().sum().cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("laplacian edge cases", "[system]") {
  DirectedGraph zero{Eigen::MatrixXd::Zero(3, 3)};
  CHECK(build_laplacian(zero).norm() == 0.0);

  DirectedGraph two{Eigen::MatrixXd::Zero(2, 2)};
  two.adjacency(0, 1) = 2.0;
  const Eigen::MatrixXd L = build_laplacian(two);
  Eigen::MatrixXd expected(2, 2);
  expected << 2, -2, 0, 0;
  CHECK((L - expected).norm() == 0.0);

  DirectedGraph bad{Eigen::MatrixXd::Zero(2, 2)};
  bad.adjacency(0, 1) = -1.0;
  CHECK_THROWS_AS(build_laplacian(bad), DimensionError);
  bad.adjacency(0, 1) = 0.0;
  bad.adjacency(1, 1) = 1.0;
  CHECK_THROWS_AS(build_laplacian(bad), DimensionError);
}

TEST_CASE("closed-loop matrix structure", "[system]") {
  const BenchmarkSystem sys = six_node_benchmark_system();

  SECTION("zero coupling gives a block-diagonal matrix") {
    const Eigen::MatrixXd Ac =
        closed_loop_matrix(sys.nodal, Eigen::MatrixXd::Zero(6, 6));
    CHECK((Ac - kron_identity(6, sys.nodal.A)).norm() == 0.0);
  }
  SECTION("a single node reduces to the nodal drift") {
    const Eigen::MatrixXd Ac =
        closed_loop_matrix(sys.nodal, Eigen::MatrixXd::Zero(1, 1));
    CHECK((Ac - sys.nodal.A).norm() == 0.0);
  }
  SECTION("dimension mismatch is rejected") {
    CHECK_THROWS_AS(closed_loop_matrix(sys.nodal, Eigen::MatrixXd::Zero(2, 3)),
                    DimensionError);
  }
  SECTION("sampling bound of the benchmark system") {
    const Eigen::MatrixXd Ac = closed_loop_matrix(sys.nodal, sys.laplacian);
    const double bound = std::log(2.0) / spectral_norm(Ac);
    // frozen from the arithmetic oracle on the printed matrices
    CHECK(bound == Approx(0.07025561723).epsilon(1e-6));
  }
}

TEST_CASE("row-block identity of the closed loop", "[system][property]") {
  for (std::uint64_t seed : {11, 22, 33, 44}) {
    const auto sys = random_consensus_system(4, 2, seed);
    const Eigen::MatrixXd ones =
        kron(Eigen::MatrixXd::Ones(4, 1), Eigen::MatrixXd::Identity(2, 2));
    const Eigen::MatrixXd stacked = sys.Ac * ones;
    for (int i = 0; i < 4; ++i)
      CHECK((stacked.middleRows(2 * i, 2) - sys.nodal.A).cwiseAbs().maxCoeff() <
            1e-12);
  }
}

TEST_CASE("matrix exponential against the library oracle", "[system]") {
  for (std::uint64_t seed : {1, 2, 3}) {
    for (double scale : {0.05, 1.0, 8.0}) {
      const Eigen::MatrixXd A = random_matrix(7, 7, seed, scale);
      const Eigen::MatrixXd ours = matrix_exponential(A);
      const Eigen::MatrixXd ref = A.exp();  // Eigen unsupported, independent
      CHECK((ours - ref).norm() <= 1e-11 * std::max(1.0, ref.norm()));
    }
  }
}

TEST_CASE("discretization basics", "[system]") {
  SECTION("exp of zero is the identity") {
    const Eigen::MatrixXd Ad = discretize(Eigen::MatrixXd::Zero(4, 4), 0.3);
    CHECK((Ad - Eigen::MatrixXd::Identity(4, 4)).norm() == 0.0);
  }
  SECTION("diagonal matrices exponentiate entrywise") {
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(4, 4);
    D.diagonal() = Eigen::VectorXd::LinSpaced(4, -1.0, 2.0);
    const Eigen::MatrixXd Ad = discretize(D, 0.7);
    for (int i = 0; i < 4; ++i) {
      CHECK(Ad(i, i) == Approx(std::exp(D(i, i) * 0.7)).epsilon(1e-14));
      for (int j = 0; j < 4; ++j)
        if (i != j) CHECK(Ad(i, j) == 0.0);
    }
  }
  SECTION("non-positive tau is rejected") {
    CHECK_THROWS_AS(discretize(Eigen::MatrixXd::Zero(2, 2), 0.0),
                    DimensionError);
  }
}

TEST_CASE("discretized identity and semigroup", "[system][property]") {
  for (std::uint64_t seed : {5, 6, 7}) {
    const auto sys = random_consensus_system(3, 2, seed);
    const double tau = 2.0 / std::max(1.0, spectral_norm(sys.Ac));
    const Eigen::MatrixXd Ad = discretize(sys.Ac, tau);

    const Eigen::MatrixXd ones =
        kron(Eigen::MatrixXd::Ones(3, 1), Eigen::MatrixXd::Identity(2, 2));
    const Eigen::MatrixXd expected =
        kron(Eigen::MatrixXd::Ones(3, 1), discretize(sys.nodal.A, tau));
    CHECK((Ad * ones - expected).norm() <
          1e-9 * std::max(1.0, expected.norm()));

    const Eigen::MatrixXd split =
        discretize(sys.Ac, 0.4 * tau) * discretize(sys.Ac, 0.6 * tau);
    CHECK((Ad - split).norm() < 1e-9 * std::max(1.0, Ad.norm()));
  }
}

TEST_CASE("consensus stability report", "[system]") {
  const BenchmarkSystem sys = six_node_benchmark_system();

  SECTION("the benchmark system reaches consensus") {
    const ConsensusReport rep =
        check_consensus_stability(sys.nodal, sys.laplacian);
    CHECK(rep.consensus);
    CHECK(rep.has_consensus_mode);
    CHECK(rep.modes.size() == 6);
    int consensus_modes = 0;
    for (const auto& m : rep.modes) consensus_modes += m.is_consensus_mode;
    CHECK(consensus_modes == 1);
  }
  SECTION("no feedback with an unstable drift fails") {
    NodalSystem open = sys.nodal;
    open.A = Eigen::MatrixXd::Identity(3, 3);
    open.K.setZero();
    CHECK_FALSE(check_consensus_stability(open, sys.laplacian).consensus);
  }
  SECTION("stable drift passes even with zero feedback") {
    NodalSystem stable = sys.nodal;
    stable.A = -Eigen::MatrixXd::Identity(3, 3);
    stable.K.setZero();
    CHECK(check_consensus_stability(stable, sys.laplacian).consensus);
  }
  SECTION("a defective Laplacian is rejected") {
    // directed chain: eigenvalue 1 appears twice with a single eigenvector
    Eigen::MatrixXd adj = Eigen::MatrixXd::Zero(3, 3);
    adj(1, 0) = 1.0;
    adj(2, 1) = 1.0;
    const Eigen::MatrixXd L = build_laplacian(DirectedGraph{adj});
    NodalSystem scalar;
    scalar.A = -Eigen::MatrixXd::Identity(1, 1);
    scalar.B = Eigen::MatrixXd::Identity(1, 1);
    scalar.K = Eigen::MatrixXd::Identity(1, 1);
    CHECK_THROWS_AS(check_consensus_stability(scalar, L),
                    NonDiagonalizableError);
  }
}
