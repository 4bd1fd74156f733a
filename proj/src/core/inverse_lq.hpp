#pragma once

#include <Eigen/Dense>

namespace netinfer {

/// Vectorized characterization of the cost-consistency equation
/// S vec(P) + vec(Q) = 0 with S = I (x) At^T + At^T (x) I - (Bt Kt)^T (x) I.
/// The global factors are kept so solvers can exploit their structure.
struct HSystem {
  Eigen::MatrixXd S;      // (Nn)^2 x (Nn)^2
  Eigen::MatrixXd At;     // I_N (x) A_hat
  Eigen::MatrixXd Bt;     // I_N (x) B_hat
  Eigen::MatrixXd Kt;     // L_hat (x) K_hat
  Eigen::MatrixXd A_hat;  // nodal pieces, kept for structured initialization
  Eigen::MatrixXd B_hat;
  Eigen::MatrixXd K_hat;
  Eigen::MatrixXd L_hat;
  int N = 0, n = 0, m = 0;

  Eigen::Index theta_dim() const {
    return 2 * static_cast<Eigen::Index>(N) * N * n * n;
  }
  /// H theta with H = [S, I].
  Eigen::VectorXd apply_H(const Eigen::VectorXd& theta) const;
};

HSystem build_H(const Eigen::MatrixXd& A_hat, const Eigen::MatrixXd& B_hat,
                const Eigen::MatrixXd& L_hat, const Eigen::MatrixXd& K_hat,
                int N, int n);

struct InverseLqConfig {
  double delta_rel = 1e-7;     // PSD margin on the consensus-orthogonal part
  int feasibility_sweeps = 2000;
  int gradient_iters = 200;
  double violation_tol = 1e-10;
};

struct InverseLqResult {
  Eigen::MatrixXd P;
  Eigen::MatrixXd Q;
  double kernel_residual = 0.0;  // ||H theta|| at ||theta|| = 1
  double cone_violation = 0.0;   // most negative constrained eigenvalue
  double rowsum_residual = 0.0;
  bool feasible = false;
  std::string init_used;  // "structured" | "least-singular-vector"
};

/// Minimizes theta^T H^T H theta over unit-norm theta = [vec P; vec Q]
/// subject to zero row-block sums, PSD (with a small margin on the
/// complement of the consensus subspace) and optional symmetry.
/// Initialization tries a consensus-structured kernel candidate
/// (sym(L_hat) (x) P0 from a small nodal feasibility problem) before the
/// least-singular-vector start; Dykstra feasibility refinement and the
/// projected-gradient polish follow. Throws NoConvergenceError when the
/// projection cycle stalls with a violation above tolerance.
InverseLqResult solve_inverse_lq(const HSystem& sys, bool symmetric,
                                 const InverseLqConfig& cfg = {});

struct RRecovery {
  Eigen::MatrixXd R;
  double asymmetry = 0.0;  // ||R - R^T|| / max(1, ||R||) before symmetrizing
  double min_eigenvalue = 0.0;
  bool kernel_completed = false;  // Kt Bt was singular; completed on its kernel
  double completion_value = 0.0;
  double condition = 0.0;  // of Kt Bt
};

/// R = Bt^T P Bt (Kt Bt)^{-1}, symmetrized. When Kt Bt is singular (always
/// the case for a Laplacian Kt: rank(L) = N-1) the minimum-norm solution on
/// range(Kt Bt) is completed on the orthogonal complement by c * projector,
/// c = trace of the determined part / rank; the completion does not change
/// R Kt Bt.
RRecovery recover_R(const Eigen::MatrixXd& Bt, const Eigen::MatrixXd& P,
                    const Eigen::MatrixXd& Kt);

/// Noiseless closed-loop comparison: max_k ||x_a(k) - x_b(k)|| / max(1,
/// ||x0||) over `steps` steps of period tau.
double trajectory_equivalence(const Eigen::MatrixXd& Ac_a,
                              const Eigen::MatrixXd& Ac_b,
                              const Eigen::VectorXd& x0, double tau,
                              long steps);

/// Forward LQ design with a consensus-compatible cost: given a symmetric
/// PSD Laplacian, Hurwitz nodal A, input matrix B, nodal weights C > 0 and
/// R0 > 0, produces the gain K = R0^{-1} B^T P0 (P0 the Lyapunov solution of
/// A^T P0 + P0 A = -C) together with the global (Q, R, P) for which
/// u = -(L (x) K) x is the optimal control. Used to manufacture ground truth.
struct ConsensusLqDesign {
  Eigen::MatrixXd K;   // m x n
  Eigen::MatrixXd P0;  // n x n
  Eigen::MatrixXd Q;   // Nn x Nn
  Eigen::MatrixXd R;   // Nm x Nm
  Eigen::MatrixXd P;   // Nn x Nn
};
ConsensusLqDesign design_consensus_lq(const Eigen::MatrixXd& A,
                                      const Eigen::MatrixXd& B,
                                      const Eigen::MatrixXd& L_sym,
                                      const Eigen::MatrixXd& C,
                                      const Eigen::MatrixXd& R0);

}  // namespace netinfer
