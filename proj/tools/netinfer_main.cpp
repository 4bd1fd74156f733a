// netinfer command-line front end. Talks to the shared library exclusively
// through the C interface in netinfer/netinfer.h.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "netinfer/netinfer.h"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CLI::ValidationError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CLI::ValidationError("cannot write file: " + path);
  out << content;
}

[[noreturn]] void die(const std::string& context) {
  std::cerr << "error: " << context << ": " << netinfer_last_error() << "\n";
  std::exit(1);
}

std::string take_string(char* owned) {
  std::string s(owned ? owned : "");
  netinfer_string_free(owned);
  return s;
}

std::vector<double> parse_list(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stod(item));
  }
  return out;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty())
    std::cout << text << "\n";
  else
    write_file(out_path, text);
}

struct SystemHandle {
  netinfer_system* sys = nullptr;
  ~SystemHandle() { netinfer_system_free(sys); }
};

struct TrajectoryHandle {
  netinfer_trajectory* traj = nullptr;
  ~TrajectoryHandle() { netinfer_trajectory_free(traj); }
};

netinfer_system* load_system(const std::string& path) {
  netinfer_system* sys = nullptr;
  if (path == "builtin" || path == "six-node-example") {
    if (netinfer_system_example(&sys) != NETINFER_OK) die("builtin system");
  } else if (netinfer_system_parse(read_file(path).c_str(), &sys) !=
             NETINFER_OK) {
    die("parsing system " + path);
  }
  return sys;
}

netinfer_trajectory* load_trajectory(const std::string& path) {
  const std::string text = read_file(path);
  netinfer_trajectory* traj = nullptr;
  const bool looks_json = text.find_first_not_of(" \t\r\n") != std::string::npos &&
                          text[text.find_first_not_of(" \t\r\n")] == '{';
  const netinfer_status st =
      looks_json ? netinfer_trajectory_parse_json(text.c_str(), &traj)
                 : netinfer_trajectory_parse_csv(text.c_str(), &traj);
  if (st != NETINFER_OK) die("parsing trajectory " + path);
  return traj;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"netinfer — cooperative-control simulation and inverse "
               "inference for networked dynamical systems"};
  app.require_subcommand(1);

  // ---- system check ----
  auto* sys_cmd = app.add_subcommand("system", "system utilities");
  sys_cmd->require_subcommand(1);
  std::string sys_file;
  auto* check_cmd =
      sys_cmd->add_subcommand("check", "consensus-stability report");
  check_cmd->add_option("file", sys_file, "system JSON file")->required();
  check_cmd->callback([&] {
    SystemHandle h{load_system(sys_file)};
    char* report = nullptr;
    if (netinfer_system_check(h.sys, &report) != NETINFER_OK)
      die("system check");
    std::cout << take_string(report) << "\n";
  });

  // ---- simulate ----
  auto* sim_cmd = app.add_subcommand("simulate", "generate a noisy trajectory");
  std::string sim_system, sim_sigma, sim_out;
  long sim_T = 100;
  double sim_tau = 0.0;
  std::uint64_t sim_seed = 0;
  bool sim_csv = false;
  sim_cmd->add_option("--system", sim_system, "system JSON file or 'builtin'")
      ->required();
  sim_cmd->add_option("--T", sim_T, "number of steps")->required();
  sim_cmd->add_option("--tau", sim_tau, "sampling period (s); defaults to the system file's");
  sim_cmd->add_option("--sigma", sim_sigma,
                      "comma-separated per-dimension noise std");
  sim_cmd->add_option("--seed", sim_seed, "RNG seed");
  sim_cmd->add_option("--out", sim_out, "output file (default stdout)");
  sim_cmd->add_flag("--csv", sim_csv, "emit CSV instead of the JSON envelope");
  sim_cmd->callback([&] {
    SystemHandle h{load_system(sim_system)};
    const std::vector<double> sigma = parse_list(sim_sigma);
    TrajectoryHandle t;
    if (netinfer_simulate(h.sys, sim_T, sim_tau, sigma.data(), sigma.size(),
                          nullptr, 0, sim_seed, &t.traj) != NETINFER_OK)
      die("simulate");
    char* text = nullptr;
    const netinfer_status st = sim_csv
                                   ? netinfer_trajectory_to_csv(t.traj, &text)
                                   : netinfer_trajectory_to_json(t.traj, &text);
    if (st != NETINFER_OK) die("serializing trajectory");
    emit(take_string(text), sim_out);
  });

  // ---- infer ----
  auto* infer_cmd = app.add_subcommand("infer", "inference stages");
  infer_cmd->require_subcommand(1);

  auto* ad_cmd = infer_cmd->add_subcommand(
      "ad", "estimate the discretized closed-loop matrix");
  std::string ad_traj, ad_gamma, ad_pattern = "auto", ad_out;
  bool ad_constrained = false;
  ad_cmd->add_option("--traj", ad_traj, "trajectory file (JSON or CSV)")
      ->required();
  ad_cmd->add_option("--gamma", ad_gamma,
                     "comma-separated per-dimension noise variances");
  ad_cmd->add_option("--pattern", ad_pattern, "auto|constant|linear|other");
  ad_cmd->add_flag("--constrained", ad_constrained,
                   "force the constrained fit");
  ad_cmd->add_option("--out", ad_out, "output file (default stdout)");
  ad_cmd->callback([&] {
    TrajectoryHandle t{load_trajectory(ad_traj)};
    std::string opts = "{\"pattern\":\"" + ad_pattern + "\"";
    if (ad_constrained) opts += ",\"constrained\":true";
    if (!ad_gamma.empty()) {
      opts += ",\"gamma\":[";
      const auto vals = parse_list(ad_gamma);
      for (std::size_t i = 0; i < vals.size(); ++i) {
        if (i) opts += ",";
        opts += std::to_string(vals[i]);
      }
      opts += "]";
    }
    opts += "}";
    char* result = nullptr;
    if (netinfer_infer_ad(t.traj, opts.c_str(), &result) != NETINFER_OK)
      die("infer ad");
    emit(take_string(result), ad_out);
  });

  auto* ac_cmd = infer_cmd->add_subcommand(
      "ac", "recover the continuous closed-loop matrix");
  std::string ac_ad, ac_out;
  double ac_tau = 0.0;
  ac_cmd->add_option("--ad", ac_ad, "Ad JSON file (matrix or infer-ad output)")
      ->required();
  ac_cmd->add_option("--tau", ac_tau, "sampling period (s)")->required();
  ac_cmd->add_option("--out", ac_out, "output file (default stdout)");
  ac_cmd->callback([&] {
    std::string text = read_file(ac_ad);
    // accept the infer-ad output directly
    const auto pos = text.find("\"Ad\"");
    if (pos != std::string::npos) {
      const auto open = text.find('[', pos);
      int depth = 0;
      std::size_t end = open;
      for (; end < text.size(); ++end) {
        if (text[end] == '[') ++depth;
        if (text[end] == ']' && --depth == 0) break;
      }
      text = text.substr(open, end - open + 1);
    }
    char* result = nullptr;
    if (netinfer_infer_ac(text.c_str(), ac_tau, &result) != NETINFER_OK)
      die("infer ac");
    emit(take_string(result), ac_out);
  });

  auto* dec_cmd =
      infer_cmd->add_subcommand("decouple", "extract A, L, B, K from Ac");
  std::string dec_ac, dec_out;
  int dec_N = 0, dec_n = 0, dec_m = 1;
  std::uint64_t dec_seed = 0;
  dec_cmd->add_option("--ac", dec_ac, "Ac JSON file (matrix or infer-ac output)")
      ->required();
  dec_cmd->add_option("--nodes", dec_N, "number of nodes N")->required();
  dec_cmd->add_option("--dim", dec_n, "nodal state dimension n")->required();
  dec_cmd->add_option("--inputs", dec_m, "nodal input dimension m");
  dec_cmd->add_option("--seed", dec_seed, "perturbation seed");
  dec_cmd->add_option("--out", dec_out, "output file (default stdout)");
  dec_cmd->callback([&] {
    std::string text = read_file(dec_ac);
    const auto pos = text.find("\"Ac\"");
    if (pos != std::string::npos) {
      const auto open = text.find('[', pos);
      int depth = 0;
      std::size_t end = open;
      for (; end < text.size(); ++end) {
        if (text[end] == '[') ++depth;
        if (text[end] == ']' && --depth == 0) break;
      }
      text = text.substr(open, end - open + 1);
    }
    char* result = nullptr;
    if (netinfer_decouple(text.c_str(), dec_N, dec_n, dec_m, dec_seed, "",
                          &result) != NETINFER_OK)
      die("infer decouple");
    emit(take_string(result), dec_out);
  });

  // ---- inverse-lq ----
  auto* lq_cmd = app.add_subcommand(
      "inverse-lq", "reconstruct LQ cost matrices from decoupled factors");
  std::string lq_factors, lq_out;
  bool lq_symmetric = false;
  lq_cmd->add_option("--factors", lq_factors,
                     "factors JSON (decouple output)")
      ->required();
  lq_cmd->add_flag("--symmetric", lq_symmetric, "enforce symmetric Q and P");
  lq_cmd->add_option("--out", lq_out, "output file (default stdout)");
  lq_cmd->callback([&] {
    char* result = nullptr;
    if (netinfer_inverse_lq(read_file(lq_factors).c_str(),
                            lq_symmetric ? 1 : 0, &result) != NETINFER_OK)
      die("inverse-lq");
    emit(take_string(result), lq_out);
  });

  // ---- bench ----
  auto* bench_cmd = app.add_subcommand("bench", "run an experiment sweep");
  std::string bench_config, bench_outdir;
  bench_cmd->add_option("--config", bench_config, "sweep config JSON file")
      ->required();
  bench_cmd->add_option("--out-dir", bench_outdir,
                        "output directory (overrides the config)");
  bench_cmd->callback([&] {
    char* summary = nullptr;
    if (netinfer_bench(read_file(bench_config).c_str(),
                       bench_outdir.empty() ? nullptr : bench_outdir.c_str(),
                       &summary) != NETINFER_OK)
      die("bench");
    std::cout << take_string(summary) << "\n";
  });

  CLI11_PARSE(app, argc, argv);
  return 0;
}
