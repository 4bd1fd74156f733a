#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "core/io.hpp"
#include "core/pipeline.hpp"

namespace netinfer {

/// One benchmark sweep: an axis, its values, a seed list and the fixed
/// parameters of the cells.
struct ExperimentConfig {
  SystemSpec system;
  std::string axis = "T";  // "T" | "tau" | "noise"
  std::vector<double> values;
  std::vector<std::uint64_t> seeds;
  double horizon_seconds = 50.0;  // ties T and tau on the T/tau axes
  double tau = 0.05;              // fixed tau on the noise axis
  long T = 100;                   // fixed T on the noise axis
  Eigen::VectorXd sigma_base;     // noise scale divided by a noise-axis value
  double x0_low = 0.0, x0_high = 1000.0;
  int n_inputs = 1;
  bool run_inverse_lq = false;
  std::string out_dir;

  void validate() const;
};

ExperimentConfig config_from_json(const std::string& text);

struct ErrorRecord {
  std::string quantity;
  double sweep_value = 0.0;
  std::uint64_t seed = 0;
  double er = 0.0;
  bool ok = false;
  std::string status;  // "ok" or the failure reason
};

struct SweepOutput {
  std::vector<ErrorRecord> records;
  std::string csv;           // results.csv content
  std::string summary_json;  // medians per (quantity, sweep value)
  std::string diagnostics;   // one JSON object per cell
};

/// Runs every (sweep value x seed) cell through the full inference stack and
/// records scalar-ambiguity-corrected errors for Ad, Ac, A, BK, L (and Q/P
/// when ground truth is available). Per-cell failures are recorded and the
/// sweep continues. Output ordering is deterministic: by sweep value, then
/// seed, then quantity.
SweepOutput run_sweep(const ExperimentConfig& cfg);

/// Writes results.csv, summary.json and diagnostics.jsonl under cfg.out_dir.
void write_sweep_output(const ExperimentConfig& cfg, const SweepOutput& out);

}  // namespace netinfer
