#include <catch2/catch_amalgamated.hpp>

#include "core/decouple.hpp"
#include "core/errors.hpp"
#include "core/graph.hpp"
#include "core/linalg.hpp"
#include "core/metrics.hpp"
#include "core/system.hpp"
#include "helpers.hpp"

using namespace netinfer;
using netinfer::testing::random_consensus_system;
using netinfer::testing::random_matrix;
using Catch::Approx;

namespace {

// average diagonal entry of a Laplacian (the surrogate's hidden scale)
double average_degree(const Eigen::MatrixXd& L) {
  return L.trace() / static_cast<double>(L.rows());
}

}  // namespace

TEST_CASE("nodal drift extraction", "[decouple]") {
  const BenchmarkSystem sys = six_node_benchmark_system();
  const Eigen::MatrixXd Ac = closed_loop_matrix(sys.nodal, sys.laplacian);

  SECTION("benchmark closed loop returns the printed drift") {
    CHECK((extract_A(Ac, 6, 3) - sys.nodal.A).cwiseAbs().maxCoeff() < 1e-10);
  }
  SECTION("decoupled network returns the drift trivially") {
    const Eigen::MatrixXd block = kron_identity(6, sys.nodal.A);
    CHECK((extract_A(block, 6, 3) - sys.nodal.A).norm() == 0.0);
  }
  SECTION("random systems satisfy the block-average identity") {
    for (std::uint64_t seed : {3, 4, 5}) {
      const auto rnd = random_consensus_system(5, 3, seed);
      CHECK((extract_A(rnd.Ac, 5, 3) - rnd.nodal.A).cwiseAbs().maxCoeff() <
            1e-10);
    }
  }
}

TEST_CASE("feedback-product estimate", "[decouple]") {
  const BenchmarkSystem sys = six_node_benchmark_system();
  const Eigen::MatrixXd Ac = closed_loop_matrix(sys.nodal, sys.laplacian);
  const Eigen::MatrixXd BK = sys.nodal.B * sys.nodal.K;

  SECTION("exact inputs give Z = s_L B K with s_L = 2.5") {
    const auto [W, Z] = compute_W_Z(Ac, sys.nodal.A);
    const double s_L = average_degree(sys.laplacian);  // row-sum oracle
    CHECK(s_L == Approx(2.5));
    CHECK((Z - s_L * BK).norm() <= 1e-12 * std::max(1.0, BK.norm()));
    CHECK((W - kron(sys.laplacian, BK)).norm() <= 1e-12);
  }
  SECTION("zero coupling gives zero W and Z") {
    const Eigen::MatrixXd block = kron_identity(6, sys.nodal.A);
    const auto [W, Z] = compute_W_Z(block, sys.nodal.A);
    CHECK(W.norm() == 0.0);
    CHECK(Z.norm() == 0.0);
  }
  SECTION("random single-input systems give Z proportional to B K") {
    for (std::uint64_t seed : {6, 7}) {
      const auto rnd = random_consensus_system(4, 3, seed);
      const auto [W, Z] = compute_W_Z(rnd.Ac, rnd.nodal.A);
      const Eigen::MatrixXd bk = rnd.nodal.B * rnd.nodal.K;
      const double s_L = average_degree(rnd.laplacian);
      CHECK((Z - s_L * bk).norm() < 1e-9 * std::max(1.0, bk.norm()));
    }
  }
}

TEST_CASE("surrogate Laplacian", "[decouple]") {
  const BenchmarkSystem sys = six_node_benchmark_system();
  const Eigen::MatrixXd Ac = closed_loop_matrix(sys.nodal, sys.laplacian);
  const auto [W, Z] = compute_W_Z(Ac, sys.nodal.A);

  SECTION("exact inputs recover L up to the hidden scale") {
    const Eigen::MatrixXd Lt = surrogate_L(W, Z, 6, 3);
    CHECK((Lt - sys.laplacian / 2.5).cwiseAbs().maxCoeff() < 1e-10);
  }
  SECTION("scale consistency: kron(L~, Z) reproduces W") {
    const Eigen::MatrixXd Lt = surrogate_L(W, Z, 6, 3);
    CHECK((kron(Lt, Z) - W).norm() <= 1e-8 * std::max(1.0, W.norm()));
  }
  SECTION("a singleton index set reduces to the element-wise ratio") {
    Eigen::MatrixXd Zs = Eigen::MatrixXd::Zero(2, 2);
    Zs(1, 0) = 4.0;  // single entry above threshold
    Eigen::MatrixXd Ls(3, 3);
    Ls << 2, -1, -1, 0, 1, -1, -2, 0, 2;
    const Eigen::MatrixXd Ws = kron(Ls, Zs);
    const Eigen::MatrixXd Lt = surrogate_L(Ws, Zs, 3, 2);
    CHECK((Lt - Ls).cwiseAbs().maxCoeff() < 1e-12);
  }
  SECTION("an all-zero product is rejected") {
    CHECK_THROWS_AS(
        surrogate_L(Eigen::MatrixXd::Zero(6, 6), Eigen::MatrixXd::Zero(2, 2),
                    3, 2),
        EmptyIndexSetError);
  }
}

TEST_CASE("Laplacian projection", "[decouple]") {
  const BenchmarkSystem sys = six_node_benchmark_system();

  SECTION("a valid simple Laplacian is a fixed point") {
    const Eigen::MatrixXd Lt = sys.laplacian / 2.5;
    const LaplacianProjection proj = project_laplacian(Lt);
    CHECK(proj.simple);
    CHECK((proj.L - Lt).norm() <= 1e-6 * Lt.norm());
  }
  SECTION("support of the benchmark graph is preserved") {
    const LaplacianProjection proj = project_laplacian(sys.laplacian / 2.5);
    const double eps_support = 10.0 * 1e-6;
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) {
        if (i == j) continue;
        const bool edge = sys.graph.adjacency(i, j) > 0;
        CHECK((std::abs(proj.L(i, j)) > eps_support) == edge);
      }
  }
  SECTION("feasibility invariants always hold") {
    for (std::uint64_t seed : {1, 2, 3, 4, 5}) {
      const Eigen::MatrixXd noise = random_matrix(5, 5, seed, 0.3);
      ThresholdConfig cfg;
      cfg.seed = seed;
      const LaplacianProjection proj = project_laplacian(
          build_laplacian(netinfer::testing::random_connected_graph(5, seed)) +
              noise,
          cfg);
      CHECK(proj.row_sum_residual <= 1e-8);
      for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j)
          if (i != j) CHECK(proj.L(i, j) <= 0.0);
    }
  }
  SECTION("a small spurious entry is suppressed below the support level") {
    int suppressed = 0;
    const double min_edge =
        0.4;  // smallest off-diagonal magnitude of L / 2.5
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      Eigen::MatrixXd Lt = sys.laplacian / 2.5;
      // spurious positive coupling on a non-edge, 1% of the smallest edge
      Lt(0, 3) -= 0.01 * min_edge;
      Lt(0, 0) += 0.01 * min_edge;
      ThresholdConfig cfg;
      cfg.seed = seed;
      const LaplacianProjection proj = project_laplacian(Lt, cfg);
      if (std::abs(proj.L(0, 3)) < 10.0 * cfg.eps_L * 10.0) ++suppressed;
    }
    CHECK(suppressed >= 18);
  }
}

TEST_CASE("single-input factor extraction", "[decouple]") {
  const BenchmarkSystem sys = six_node_benchmark_system();
  const Eigen::MatrixXd Ac = closed_loop_matrix(sys.nodal, sys.laplacian);
  const auto [W, Z] = compute_W_Z(Ac, sys.nodal.A);

  SECTION("benchmark input vector is written in the anchor scale") {
    const Eigen::VectorXd B = extract_B_single(Z);
    Eigen::VectorXd expected(3);
    expected << 0, 0, 1;
    CHECK((B - expected).cwiseAbs().maxCoeff() < 1e-12);
  }
  SECTION("ratio structure of a rank-one product") {
    Eigen::VectorXd b(2);
    b << 2, 4;
    Eigen::RowVectorXd k(2);
    k << 1.0, -0.7;
    const Eigen::MatrixXd Zr = b * k;
    const Eigen::VectorXd B = extract_B_single(Zr);
    Eigen::VectorXd expected(2);
    expected << 0.5, 1.0;
    CHECK((B - expected).cwiseAbs().maxCoeff() < 1e-12);
  }
  SECTION("gain recovery carries the predicted ambiguity scalar") {
    const Eigen::VectorXd B = extract_B_single(Z);
    const Eigen::RowVectorXd K = extract_K_single(B, Z);
    // beta = s_L * B_{ld} = 2.5 * 1
    CHECK((K - 2.5 * sys.nodal.K).cwiseAbs().maxCoeff() < 1e-10);
  }
  SECTION("projection onto a coordinate input") {
    Eigen::MatrixXd Zr = random_matrix(3, 3, 10);
    Eigen::VectorXd e1 = Eigen::VectorXd::Zero(3);
    e1(0) = 1.0;
    const Eigen::RowVectorXd K = extract_K_single(e1, Zr);
    CHECK((K - Zr.row(0)).norm() == 0.0);
  }
  SECTION("noisy products keep the direction of B") {
    int ok = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const Eigen::MatrixXd noise = random_matrix(3, 3, 40 + seed);
      const Eigen::MatrixXd Zn =
          Z + 1e-4 * noise / noise.norm() * Z.norm();
      const Eigen::VectorXd B = extract_B_single(Zn);
      if (error_metric(B, sys.nodal.B, true).er < 1e-2) ++ok;
    }
    CHECK(ok == 20);
  }
  SECTION("rank-one least squares residual") {
    Eigen::VectorXd b = random_matrix(4, 1, 11);
    Eigen::RowVectorXd k = random_matrix(1, 4, 12);
    const Eigen::MatrixXd Zr = b * k;
    const Eigen::VectorXd B = extract_B_single(Zr);
    const Eigen::RowVectorXd K = extract_K_single(B, Zr);
    CHECK(error_metric(K, k, true).er < 1e-10);
  }
}

TEST_CASE("multi-input factorization", "[decouple]") {
  SECTION("exact rank-m products factor exactly") {
    const Eigen::MatrixXd B = random_matrix(4, 2, 13);
    const Eigen::MatrixXd K = random_matrix(2, 4, 14);
    const Eigen::MatrixXd Z = B * K;
    const auto [Bh, Kh] = factor_BK_svd(Z, 2);
    CHECK((Bh * Kh - Z).norm() <= 1e-10 * Z.norm());
    const Eigen::MatrixXd KB = Kh * Bh;
    CHECK(condition_number_2(KB) < 1e8);
  }
  SECTION("rank-one special case") {
    Eigen::VectorXd u = random_matrix(3, 1, 15);
    Eigen::RowVectorXd v = random_matrix(1, 3, 16);
    const Eigen::MatrixXd Z = u * v;
    const auto [Bh, Kh] = factor_BK_svd(Z, 1);
    CHECK((Bh * Kh - Z).norm() <= 1e-10 * Z.norm());
    CHECK((Kh * Bh)(0, 0) == Approx(u.norm() * v.norm()).epsilon(1e-10));
  }
  SECTION("Eckart-Young optimality under perturbation") {
    const Eigen::MatrixXd B = random_matrix(5, 2, 17);
    const Eigen::MatrixXd K = random_matrix(2, 5, 18);
    const Eigen::MatrixXd Z0 = B * K;
    const Eigen::MatrixXd Z =
        Z0 + 1e-6 * random_matrix(5, 5, 19, 1.0 / std::sqrt(25.0));
    const auto [Bh, Kh] = factor_BK_svd(Z, 2);
    // oracle: the best rank-2 error is the tail singular value mass
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(Z);
    const Eigen::VectorXd s = svd.singularValues();
    const double best = s.tail(s.size() - 2).norm();
    CHECK((Bh * Kh - Z).norm() <= best + 1e-5);
  }
  SECTION("rank collapse is reported") {
    const Eigen::MatrixXd Z =
        random_matrix(4, 1, 20) * random_matrix(1, 4, 21);
    CHECK_THROWS_AS(factor_BK_svd(Z, 2), SingularMatrixError);
  }
}

TEST_CASE("end-to-end decoupling of exact closed loops",
          "[decouple][property]") {
  for (std::uint64_t seed : {100, 200, 300}) {
    const auto sys = random_consensus_system(5, 3, seed);
    ThresholdConfig cfg;
    cfg.seed = seed;
    const DecoupleResult r = decouple(sys.Ac, 5, 3, 1, cfg);
    const Eigen::MatrixXd BK = sys.nodal.B * sys.nodal.K;
    CHECK(error_metric(r.A_hat, sys.nodal.A, false).er < 1e-8);
    CHECK(error_metric(r.L_hat, sys.laplacian, true).er < 1e-4);
    CHECK(error_metric(r.B_hat * r.K_hat, BK, true).er < 1e-6);
    CHECK((r.L_hat.rowwise().sum()).cwiseAbs().maxCoeff() < 1e-8);
  }
}
