#pragma once

#include <cstdint>
#include <utility>

#include <Eigen/Dense>

namespace netinfer {

/// Parameters of the component-extraction stage.
struct ThresholdConfig {
  double eps_z_rel = 1e-3;    // near-zero exclusion, relative to max |Z|
  double alpha = 0.4;         // gradient stepsize factor of the projection loop
  int k_bar = 500;            // inner iteration limit
  int t_bar = 10;             // outer (perturbation) rounds
  double perturb_rel = 0.05;  // perturbation magnitude, relative ||L~||_F / N
  double eps_L = 1e-6;        // outer convergence threshold
  double eigengap = 1e-6;     // simple-spectrum test, min pairwise gap
  std::uint64_t seed = 0;     // perturbation stream
};

/// Average of all N^2 blocks of Ac, divided by N; equals the nodal drift A
/// exactly on a consistent closed-loop matrix.
Eigen::MatrixXd extract_A(const Eigen::MatrixXd& Ac, int N, int n);

/// W = I_N (x) A_hat - Ac_hat and the scalar-ambiguity feedback product
/// Z = (1/2N) sum_i (W_ii - sum_{j != i} W_ij); Z approaches s_L B K.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> compute_W_Z(
    const Eigen::MatrixXd& Ac, const Eigen::MatrixXd& A_hat);

/// Element-wise surrogate for L (up to the 1/s_L scale): averages
/// W[(i-1)n+l1, (j-1)n+l2] / Z_{l1 l2} over the retained index set.
/// Throws EmptyIndexSetError when no entry of Z clears the threshold.
Eigen::MatrixXd surrogate_L(const Eigen::MatrixXd& W, const Eigen::MatrixXd& Z,
                            int N, int n, const ThresholdConfig& cfg = {});

struct LaplacianProjection {
  Eigen::MatrixXd L;
  bool simple = false;
  int outer_rounds = 0;
  double row_sum_residual = 0.0;
  bool sign_flipped = false;
};

/// Alternating-minimization projection of the surrogate onto
/// { L 1 = 0, off-diagonals <= 0, numerically simple spectrum }, with random
/// perturbation rounds to promote distinct eigenvalues. Always returns the
/// final iterate plus the simplicity flag.
LaplacianProjection project_laplacian(const Eigen::MatrixXd& L_tilde,
                                      const ThresholdConfig& cfg = {});

/// Single-input (m = 1) input-vector estimate from ratios against the
/// strongest row of Z; the anchor entry becomes exactly 1.
Eigen::VectorXd extract_B_single(const Eigen::MatrixXd& Z,
                                 const ThresholdConfig& cfg = {});

/// K = (B^T B)^{-1} B^T Z; asymptotically beta * K with beta = s_L B_{ld}.
Eigen::RowVectorXd extract_K_single(const Eigen::VectorXd& B,
                                    const Eigen::MatrixXd& Z);

/// Rank-m truncated-SVD factorization Z ~ B K with K B invertible (m > 1).
/// Throws SingularMatrixError if sigma_m < 1e-10 sigma_1.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> factor_BK_svd(
    const Eigen::MatrixXd& Z, int m);

/// Full decoupling of one closed-loop matrix estimate.
struct DecoupleResult {
  Eigen::MatrixXd A_hat;
  Eigen::MatrixXd W;
  Eigen::MatrixXd Z;        // scalar-ambiguity estimate of s_L B K
  Eigen::MatrixXd L_tilde;  // raw surrogate
  Eigen::MatrixXd L_hat;    // projected Laplacian
  Eigen::MatrixXd B_hat;    // n x m
  Eigen::MatrixXd K_hat;    // m x n
  bool laplacian_simple = false;
  int outer_rounds = 0;
};

DecoupleResult decouple(const Eigen::MatrixXd& Ac, int N, int n, int m,
                        const ThresholdConfig& cfg = {});

}  // namespace netinfer
