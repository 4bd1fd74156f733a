#include "netinfer/netinfer.h"

#include <cstring>
#include <string>

#include <json.hpp>

#include "core/errors.hpp"
#include "core/harness.hpp"
#include "core/io.hpp"
#include "core/linalg.hpp"
#include "core/metrics.hpp"
#include "core/pipeline.hpp"

using nlohmann::json;
using namespace netinfer;

struct netinfer_system {
  SystemSpec spec;
};

struct netinfer_trajectory {
  Trajectory traj;
};

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

netinfer_status fail(netinfer_status code, const std::string& msg) {
  g_last_error = msg;
  return code;
}

template <typename Fn>
netinfer_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const SingularMatrixError& e) {
    return fail(NETINFER_ERR_SINGULAR, e.what());
  } catch (const DivergentSeriesError& e) {
    return fail(NETINFER_ERR_DIVERGENT_SERIES, e.what());
  } catch (const NoConvergenceError& e) {
    return fail(NETINFER_ERR_NO_CONVERGENCE, e.what());
  } catch (const NonDiagonalizableError& e) {
    return fail(NETINFER_ERR_NON_DIAGONALIZABLE, e.what());
  } catch (const EmptyIndexSetError& e) {
    return fail(NETINFER_ERR_EMPTY_INDEX_SET, e.what());
  } catch (const OverflowError& e) {
    return fail(NETINFER_ERR_OVERFLOW, e.what());
  } catch (const DimensionError& e) {
    return fail(NETINFER_ERR_INVALID_ARGUMENT, e.what());
  } catch (const Error& e) {
    return fail(NETINFER_ERR_INTERNAL, e.what());
  } catch (const std::exception& e) {
    return fail(NETINFER_ERR_INTERNAL, e.what());
  }
}

json matrix_json(const Eigen::MatrixXd& M) {
  return json::parse(matrix_to_json_text(M));
}

}  // namespace

extern "C" {

const char* netinfer_version(void) { return "0.1.0"; }

const char* netinfer_last_error(void) { return g_last_error.c_str(); }

void netinfer_string_free(char* s) { delete[] s; }

netinfer_status netinfer_system_parse(const char* json_text,
                                      netinfer_system** out) {
  if (!json_text || !out)
    return fail(NETINFER_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    auto* sys = new netinfer_system{system_from_json(json_text)};
    *out = sys;
    return NETINFER_OK;
  });
}

netinfer_status netinfer_system_example(netinfer_system** out) {
  if (!out) return fail(NETINFER_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const BenchmarkSystem b = six_node_benchmark_system();
    auto* sys = new netinfer_system;
    sys->spec.graph = b.graph;
    sys->spec.nodal = b.nodal;
    sys->spec.tau = 0.05;
    *out = sys;
    return NETINFER_OK;
  });
}

void netinfer_system_free(netinfer_system* sys) { delete sys; }

netinfer_status netinfer_system_check(const netinfer_system* sys,
                                      char** report_json) {
  if (!sys || !report_json)
    return fail(NETINFER_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const Eigen::MatrixXd L = build_laplacian(sys->spec.graph);
    const ConsensusReport rep = check_consensus_stability(sys->spec.nodal, L);
    json j;
    j["consensus"] = rep.consensus;
    j["has_consensus_mode"] = rep.has_consensus_mode;
    json modes = json::array();
    for (const auto& m : rep.modes) {
      json e;
      e["lambda_re"] = m.lambda.real();
      e["lambda_im"] = m.lambda.imag();
      e["max_real_part"] = m.max_real_part;
      e["hurwitz"] = m.hurwitz;
      e["consensus_mode"] = m.is_consensus_mode;
      modes.push_back(e);
    }
    j["modes"] = modes;
    *report_json = dup_string(j.dump(2));
    return NETINFER_OK;
  });
}

netinfer_status netinfer_simulate(const netinfer_system* sys, long T,
                                  double tau, const double* sigma,
                                  size_t sigma_len, const double* x0,
                                  size_t x0_len, uint64_t seed,
                                  netinfer_trajectory** out) {
  if (!sys || !out)
    return fail(NETINFER_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const Eigen::MatrixXd L = build_laplacian(sys->spec.graph);
    const double period = tau > 0 ? tau : sys->spec.tau;
    const ClosedLoop cl = make_closed_loop(sys->spec.nodal, L, period);
    NoiseModel noise;
    if (sigma && sigma_len > 0)
      noise.sigma = Eigen::Map<const Eigen::VectorXd>(sigma, sigma_len);
    else
      noise.sigma = Eigen::VectorXd::Zero(sys->spec.nodal.n());
    Eigen::VectorXd state0;
    const Eigen::Index dim = cl.Ad.rows();
    if (x0 && x0_len > 0) {
      if (static_cast<Eigen::Index>(x0_len) != dim)
        throw DimensionError("x0 must have length N*n");
      state0 = Eigen::Map<const Eigen::VectorXd>(x0, x0_len);
    } else {
      GaussianSampler rng(seed ^ 0xDA3E39CB94B95BDBULL);
      state0.resize(dim);
      for (Eigen::Index i = 0; i < dim; ++i)
        state0(i) = 1000.0 * rng.uniform01();
    }
    auto* traj = new netinfer_trajectory{simulate(cl, state0, T, noise, seed)};
    *out = traj;
    return NETINFER_OK;
  });
}

netinfer_status netinfer_trajectory_parse_json(const char* json_text,
                                               netinfer_trajectory** out) {
  if (!json_text || !out)
    return fail(NETINFER_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = new netinfer_trajectory{trajectory_from_json(json_text)};
    return NETINFER_OK;
  });
}

netinfer_status netinfer_trajectory_parse_csv(const char* csv_text,
                                              netinfer_trajectory** out) {
  if (!csv_text || !out)
    return fail(NETINFER_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = new netinfer_trajectory{trajectory_from_csv(csv_text)};
    return NETINFER_OK;
  });
}

netinfer_status netinfer_trajectory_to_json(const netinfer_trajectory* traj,
                                            char** json_text) {
  if (!traj || !json_text)
    return fail(NETINFER_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *json_text = dup_string(trajectory_to_json(traj->traj));
    return NETINFER_OK;
  });
}

netinfer_status netinfer_trajectory_to_csv(const netinfer_trajectory* traj,
                                           char** csv_text) {
  if (!traj || !csv_text)
    return fail(NETINFER_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *csv_text = dup_string(trajectory_to_csv(traj->traj));
    return NETINFER_OK;
  });
}

void netinfer_trajectory_free(netinfer_trajectory* traj) { delete traj; }

netinfer_status netinfer_infer_ad(const netinfer_trajectory* traj,
                                  const char* options_json,
                                  char** result_json) {
  if (!traj || !result_json)
    return fail(NETINFER_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    json opts = options_json && *options_json ? json::parse(options_json)
                                              : json::object();
    PipelineOptions po;
    po.pattern = opts.value("pattern", std::string("auto"));
    po.force_constrained = opts.value("constrained", false);
    if (opts.contains("confit")) {
      const auto& c = opts.at("confit");
      po.confit.max_iters = c.value("max_iters", po.confit.max_iters);
      po.confit.step_scale = c.value("step_scale", po.confit.step_scale);
      po.confit.tolerance = c.value("tolerance", po.confit.tolerance);
      po.confit.dykstra_rounds =
          c.value("dykstra_rounds", po.confit.dykstra_rounds);
    }
    Eigen::MatrixXd gamma;
    if (opts.contains("gamma")) {
      const auto v = opts.at("gamma").get<std::vector<double>>();
      gamma = Eigen::Map<const Eigen::VectorXd>(v.data(), v.size())
                  .asDiagonal();
    } else {
      gamma = traj->traj.noise.gamma();
      if (gamma.rows() == 0)
        gamma = Eigen::MatrixXd::Zero(traj->traj.state_dim,
                                      traj->traj.state_dim);
    }

    const Trajectory& t = traj->traj;
    const int window = default_window(t.horizon());
    const double threshold =
        opts.contains("threshold") ? opts.at("threshold").get<double>()
                                   : default_threshold(t.noise);
    PatternLabel label = classify_pattern(t, window, threshold);

    json j;
    j["pattern"] = {{"eps1", label.eps1},
                    {"eps2", label.eps2},
                    {"threshold", label.threshold},
                    {"window", label.window},
                    {"kind", static_cast<int>(label.kind)}};

    if (po.pattern == "constant") label.kind = PatternKind::Constant;
    if (po.pattern == "linear") label.kind = PatternKind::LinearGrowth;
    if (po.pattern == "other") label.kind = PatternKind::Other;
    const CovariancePair cov = label.kind == PatternKind::LinearGrowth
                                   ? diff_covariances(t)
                                   : sample_covariances(t);

    AdEstimate ad;
    bool constrained = po.force_constrained;
    if (!constrained) {
      try {
        ad = estimate_Ad(cov, label, gamma);
        const Eigen::MatrixXd I =
            Eigen::MatrixXd::Identity(t.dim(), t.dim());
        if (!(spectral_norm(ad.Ad - I) < 1.0)) constrained = true;
        j["condition"] = ad.condition;
      } catch (const SingularMatrixError& e) {
        constrained = true;
        j["estimator_error"] = e.what();
      }
    }
    if (constrained) {
      const CovariancePair fit_cov =
          cov.differenced ? sample_covariances(t) : cov;
      const ConstrainedFitResult fit =
          fit_Ad_constrained(fit_cov, gamma, label, po.confit);
      ad.Ad = fit.Ad;
      ad.branch = "constrained";
      j["confit"] = {{"objective", fit.objective},
                     {"iterations", fit.iterations},
                     {"converged", fit.converged},
                     {"equality_violation", fit.equality_violation}};
    }
    j["branch"] = ad.branch;
    j["Ad"] = matrix_json(ad.Ad);
    *result_json = dup_string(j.dump());
    return NETINFER_OK;
  });
}

netinfer_status netinfer_infer_ac(const char* ad_json, double tau,
                                  char** result_json) {
  if (!ad_json || !result_json)
    return fail(NETINFER_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const Eigen::MatrixXd Ad = matrix_from_json_text(ad_json);
    const AcRecovery rec = recover_Ac(Ad, tau);
    json j;
    j["Ac"] = matrix_json(rec.Ac);
    j["terms_used"] = rec.log.terms_used;
    j["residual"] = rec.log.residual;
    j["converged"] = rec.log.converged;
    j["tau_max"] = rec.tau_max_post;
    j["uniqueness_warning"] = rec.uniqueness_warning;
    *result_json = dup_string(j.dump());
    return NETINFER_OK;
  });
}

netinfer_status netinfer_decouple(const char* ac_json, int N, int n, int m,
                                  uint64_t seed, const char* options_json,
                                  char** result_json) {
  if (!ac_json || !result_json)
    return fail(NETINFER_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const Eigen::MatrixXd Ac = matrix_from_json_text(ac_json);
    ThresholdConfig cfg;
    cfg.seed = seed;
    if (options_json && *options_json) {
      const json opts = json::parse(options_json);
      cfg.eps_z_rel = opts.value("eps_z_rel", cfg.eps_z_rel);
      cfg.alpha = opts.value("alpha", cfg.alpha);
      cfg.k_bar = opts.value("k_bar", cfg.k_bar);
      cfg.t_bar = opts.value("t_bar", cfg.t_bar);
      cfg.perturb_rel = opts.value("perturb_rel", cfg.perturb_rel);
      cfg.eps_L = opts.value("eps_L", cfg.eps_L);
    }
    const DecoupleResult r = decouple(Ac, N, n, m, cfg);
    json j;
    j["A"] = matrix_json(r.A_hat);
    j["W"] = matrix_json(r.W);
    j["Z"] = matrix_json(r.Z);
    j["L_tilde"] = matrix_json(r.L_tilde);
    j["L"] = matrix_json(r.L_hat);
    j["B"] = matrix_json(r.B_hat);
    j["K"] = matrix_json(r.K_hat);
    j["laplacian_simple"] = r.laplacian_simple;
    j["N"] = N;
    j["n"] = n;
    j["m"] = m;
    *result_json = dup_string(j.dump());
    return NETINFER_OK;
  });
}

netinfer_status netinfer_inverse_lq(const char* factors_json, int symmetric,
                                    char** result_json) {
  if (!factors_json || !result_json)
    return fail(NETINFER_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const json f = json::parse(factors_json);
    const Eigen::MatrixXd A = matrix_from_json_text(f.at("A").dump());
    const Eigen::MatrixXd B = matrix_from_json_text(f.at("B").dump());
    const Eigen::MatrixXd K = matrix_from_json_text(f.at("K").dump());
    const Eigen::MatrixXd L = matrix_from_json_text(f.at("L").dump());
    const int N = f.value("N", static_cast<int>(L.rows()));
    const int n = f.value("n", static_cast<int>(A.rows()));
    const HSystem sys = build_H(A, B, L, K, N, n);
    const InverseLqResult lq = solve_inverse_lq(sys, symmetric != 0);
    const RRecovery rr = recover_R(sys.Bt, lq.P, sys.Kt);
    json j;
    j["Q"] = matrix_json(lq.Q);
    j["P"] = matrix_json(lq.P);
    j["R"] = matrix_json(rr.R);
    j["kernel_residual"] = lq.kernel_residual;
    j["cone_violation"] = lq.cone_violation;
    j["rowsum_residual"] = lq.rowsum_residual;
    j["init_used"] = lq.init_used;
    j["r_diagnostics"] = {{"asymmetry", rr.asymmetry},
                          {"min_eigenvalue", rr.min_eigenvalue},
                          {"kernel_completed", rr.kernel_completed},
                          {"completion_value", rr.completion_value},
                          {"condition", rr.condition}};
    *result_json = dup_string(j.dump());
    return NETINFER_OK;
  });
}

netinfer_status netinfer_bench(const char* config_json, const char* out_dir,
                               char** summary_json) {
  if (!config_json || !summary_json)
    return fail(NETINFER_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    ExperimentConfig cfg = config_from_json(config_json);
    if (out_dir && *out_dir) cfg.out_dir = out_dir;
    const SweepOutput out = run_sweep(cfg);
    write_sweep_output(cfg, out);
    *summary_json = dup_string(out.summary_json);
    return NETINFER_OK;
  });
}

}  // extern "C"
