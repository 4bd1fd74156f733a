#include "core/pipeline.hpp"

#include "core/errors.hpp"
#include "core/linalg.hpp"

namespace netinfer {

InferenceReport run_inference(const Trajectory& traj,
                              const Eigen::MatrixXd& gamma,
                              const PipelineOptions& opts) {
  InferenceReport rep;
  const long T = traj.horizon();
  const int window = opts.window > 0 ? opts.window : default_window(T);
  const double threshold =
      opts.threshold >= 0.0 ? opts.threshold : default_threshold(traj.noise);

  rep.label = classify_pattern(traj, window, threshold);
  if (opts.pattern == "constant")
    rep.label.kind = PatternKind::Constant;
  else if (opts.pattern == "linear")
    rep.label.kind = PatternKind::LinearGrowth;
  else if (opts.pattern == "other")
    rep.label.kind = PatternKind::Other;

  const CovariancePair cov = rep.label.kind == PatternKind::LinearGrowth
                                 ? diff_covariances(traj)
                                 : sample_covariances(traj);

  const Eigen::Index dim = traj.dim();
  bool need_constrained = opts.force_constrained;
  if (!need_constrained) {
    try {
      rep.ad = estimate_Ad(cov, rep.label, gamma);
      const double ball =
          spectral_norm(rep.ad.Ad - Eigen::MatrixXd::Identity(dim, dim));
      if (!(ball < 1.0)) need_constrained = true;
    } catch (const SingularMatrixError&) {
      need_constrained = true;
    }
  }
  if (need_constrained) {
    // The constrained fit consumes the plain covariance pair; the
    // differenced matrices only feed the raw linear-growth estimator.
    const CovariancePair& fit_cov =
        cov.differenced ? sample_covariances(traj) : cov;
    rep.confit = fit_Ad_constrained(fit_cov, gamma, rep.label, opts.confit);
    rep.ad.Ad = rep.confit.Ad;
    rep.ad.branch = "constrained";
    rep.ad.label = rep.label.kind;
    rep.used_constrained = true;
  }

  try {
    rep.ac = recover_Ac(rep.ad.Ad, traj.tau);
  } catch (const Error& e) {
    rep.failure = std::string("log recovery: ") + e.what();
    return rep;
  }

  try {
    ThresholdConfig tc = opts.thresholds;
    tc.seed = opts.seed;
    rep.factors = decouple(rep.ac->Ac, traj.n_nodes, traj.state_dim,
                           opts.n_inputs, tc);
  } catch (const Error& e) {
    rep.failure = std::string("decoupling: ") + e.what();
    return rep;
  }

  if (opts.run_inverse_lq) {
    try {
      const auto& f = *rep.factors;
      const HSystem sys = build_H(f.A_hat, f.B_hat, f.L_hat, f.K_hat,
                                  traj.n_nodes, traj.state_dim);
      rep.lq = solve_inverse_lq(sys, opts.symmetric_cost);
      rep.r_recovery = recover_R(sys.Bt, rep.lq->P, sys.Kt);
    } catch (const Error& e) {
      rep.failure = std::string("inverse LQ: ") + e.what();
      return rep;
    }
  }
  return rep;
}

}  // namespace netinfer
