#include "core/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>

#include <json.hpp>

#include "core/errors.hpp"
#include "core/linalg.hpp"
#include "core/metrics.hpp"

namespace netinfer {

using nlohmann::json;

void ExperimentConfig::validate() const {
  if (axis != "T" && axis != "tau" && axis != "noise")
    throw DimensionError("sweep axis must be one of T | tau | noise");
  if (values.empty()) throw DimensionError("sweep values must be non-empty");
  for (std::size_t i = 1; i < values.size(); ++i)
    if (!(values[i] > values[i - 1]))
      throw DimensionError("sweep values must be strictly increasing");
  if (seeds.empty()) throw DimensionError("at least one seed is required");
}

ExperimentConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw DimensionError(std::string("invalid config JSON: ") + e.what());
  }
  ExperimentConfig cfg;
  try {
    if (j.contains("system") && j.at("system").is_object()) {
      cfg.system = system_from_json(j.at("system").dump());
    } else {
      const std::string name = j.value("system", "six-node-example");
      if (name == "six-node-example") {
        const BenchmarkSystem b = six_node_benchmark_system();
        cfg.system.graph = b.graph;
        cfg.system.nodal = b.nodal;
      } else {
        cfg.system = system_from_json(read_file(name));
      }
    }
    cfg.axis = j.value("axis", std::string("T"));
    cfg.values = j.value("values", std::vector<double>{});
    for (const auto& s : j.value("seeds", std::vector<std::uint64_t>{}))
      cfg.seeds.push_back(s);
    cfg.horizon_seconds = j.value("horizon_seconds", 50.0);
    cfg.tau = j.value("tau", 0.05);
    cfg.T = j.value("T", 100);
    if (j.contains("sigma")) {
      const auto v = j.at("sigma").get<std::vector<double>>();
      cfg.sigma_base = Eigen::Map<const Eigen::VectorXd>(v.data(), v.size());
    }
    cfg.x0_low = j.value("x0_low", 0.0);
    cfg.x0_high = j.value("x0_high", 1000.0);
    cfg.n_inputs = j.value("inputs", 1);
    cfg.run_inverse_lq = j.value("run_inverse_lq", false);
    cfg.out_dir = j.value("out_dir", std::string("bench-out"));
  } catch (const json::exception& e) {
    throw DimensionError(std::string("invalid config JSON: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Eigen::VectorXd draw_initial_state(int dim, double lo, double hi,
                                   std::uint64_t seed) {
  GaussianSampler rng(seed ^ 0xDA3E39CB94B95BDBULL);
  Eigen::VectorXd x(dim);
  for (int i = 0; i < dim; ++i) x(i) = lo + (hi - lo) * rng.uniform01();
  return x;
}

double median(std::vector<double> v) {
  if (v.empty()) return std::nan("");
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

}  // namespace

SweepOutput run_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  SweepOutput out;
  json diag_lines = json::array();

  const Eigen::MatrixXd L = build_laplacian(cfg.system.graph);
  const Eigen::MatrixXd BK = cfg.system.nodal.B * cfg.system.nodal.K;
  const int N = cfg.system.graph.n_nodes();
  const int n = cfg.system.nodal.n();

  for (const double value : cfg.values) {
    double tau = cfg.tau;
    long T = cfg.T;
    Eigen::VectorXd sigma = cfg.sigma_base;
    if (cfg.axis == "T") {
      T = static_cast<long>(std::llround(value));
      tau = cfg.horizon_seconds / static_cast<double>(T);
    } else if (cfg.axis == "tau") {
      tau = value;
      T = static_cast<long>(std::llround(cfg.horizon_seconds / tau));
    } else {
      sigma = cfg.sigma_base / value;
    }

    const ClosedLoop cl = make_closed_loop(cfg.system.nodal, L, tau);
    NoiseModel noise;
    noise.sigma = sigma;
    const Eigen::MatrixXd gamma = noise.gamma();

    for (const std::uint64_t seed : cfg.seeds) {
      const Eigen::VectorXd x0 =
          draw_initial_state(N * n, cfg.x0_low, cfg.x0_high, seed);
      json diag;
      diag["sweep_value"] = value;
      diag["seed"] = seed;
      diag["tau"] = tau;
      diag["T"] = T;

      auto push = [&](const std::string& q, double er, bool ok,
                      const std::string& status) {
        out.records.push_back({q, value, seed, er, ok, status});
      };

      try {
        const Trajectory traj = simulate(cl, x0, T, noise, seed);
        PipelineOptions opts;
        opts.n_inputs = cfg.n_inputs;
        opts.seed = seed;
        opts.run_inverse_lq = cfg.run_inverse_lq;
        const InferenceReport rep = run_inference(traj, gamma, opts);

        diag["pattern"] = static_cast<int>(rep.label.kind);
        diag["eps1"] = rep.label.eps1;
        diag["eps2"] = rep.label.eps2;
        diag["branch"] = rep.ad.branch;
        diag["constrained"] = rep.used_constrained;
        if (!rep.failure.empty()) diag["failure"] = rep.failure;

        push("Ad", error_metric(rep.ad.Ad, cl.Ad, false).er, true, "ok");
        if (rep.ac) {
          push("Ac", error_metric(rep.ac->Ac, cl.Ac, false).er, true, "ok");
        } else {
          push("Ac", std::nan(""), false, rep.failure);
        }
        if (rep.factors) {
          push("A", error_metric(rep.factors->A_hat, cfg.system.nodal.A, false)
                       .er,
               true, "ok");
          push("BK", error_metric(rep.factors->Z, BK, true).er, true, "ok");
          push("L", error_metric(rep.factors->L_hat, L, true).er, true, "ok");
        } else {
          push("A", std::nan(""), false, rep.failure);
          push("BK", std::nan(""), false, rep.failure);
          push("L", std::nan(""), false, rep.failure);
        }
        if (cfg.run_inverse_lq && rep.lq && cfg.system.Q && cfg.system.P) {
          Eigen::MatrixXd qp(N * n, 2 * N * n), qp_true(N * n, 2 * N * n);
          qp << rep.lq->Q, rep.lq->P;
          qp_true << *cfg.system.Q, *cfg.system.P;
          push("QP", error_metric(qp, qp_true, true).er, true, "ok");
        } else if (cfg.run_inverse_lq && rep.lq) {
          diag["lq_kernel_residual"] = rep.lq->kernel_residual;
        }
      } catch (const Error& e) {
        for (const char* q : {"Ad", "Ac", "A", "BK", "L"})
          push(q, std::nan(""), false, e.what());
        diag["failure"] = e.what();
      }
      diag_lines.push_back(diag);
    }
  }

  // results.csv
  std::string csv = "quantity,sweep_value,seed,er,status\n";
  for (const auto& r : out.records) {
    csv += r.quantity + "," + fmt(r.sweep_value) + "," +
           std::to_string(r.seed) + "," + (r.ok ? fmt(r.er) : "nan") + "," +
           (r.ok ? "ok" : "failed") + "\n";
  }
  out.csv = std::move(csv);

  // summary.json: medians over seeds per (quantity, value)
  std::map<std::string, std::map<double, std::vector<double>>> acc;
  for (const auto& r : out.records)
    if (r.ok && std::isfinite(r.er)) acc[r.quantity][r.sweep_value].push_back(r.er);
  json summary;
  summary["axis"] = cfg.axis;
  json med = json::object();
  for (const auto& [q, by_value] : acc) {
    json entries = json::array();
    for (const auto& [v, ers] : by_value) {
      json e;
      e["value"] = v;
      e["median_er"] = median(ers);
      e["count"] = ers.size();
      entries.push_back(e);
    }
    med[q] = entries;
  }
  summary["median_er"] = med;
  out.summary_json = summary.dump(2);

  std::string diags;
  for (const auto& d : diag_lines) diags += d.dump() + "\n";
  out.diagnostics = std::move(diags);
  return out;
}

void write_sweep_output(const ExperimentConfig& cfg, const SweepOutput& out) {
  namespace fs = std::filesystem;
  fs::create_directories(cfg.out_dir);
  write_file((fs::path(cfg.out_dir) / "results.csv").string(), out.csv);
  write_file((fs::path(cfg.out_dir) / "summary.json").string(),
             out.summary_json);
  write_file((fs::path(cfg.out_dir) / "diagnostics.jsonl").string(),
             out.diagnostics);
}

}  // namespace netinfer
