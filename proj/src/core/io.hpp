#pragma once

#include <optional>
#include <string>

#include <Eigen/Dense>

#include "core/system.hpp"
#include "core/trajectory.hpp"

namespace netinfer {

/// A system definition as found in a JSON document: adjacency, nodal
/// matrices, sampling period, plus optional ground-truth cost matrices.
struct SystemSpec {
  DirectedGraph graph;
  NodalSystem nodal;
  double tau = 0.05;
  std::optional<Eigen::MatrixXd> Q;  // ground truth, when supplied
  std::optional<Eigen::MatrixXd> P;
  std::optional<Eigen::MatrixXd> R;
};

SystemSpec system_from_json(const std::string& text);
std::string system_to_json(const SystemSpec& spec);

/// CSV with header k,t,node,dim,value.
std::string trajectory_to_csv(const Trajectory& traj);
/// Reconstructs the observation table; tau is inferred from the t column.
/// Noise metadata is absent in CSV and must come from elsewhere.
Trajectory trajectory_from_csv(const std::string& text);

/// JSON envelope carrying full metadata (tau, seed, sigma, rng) plus the
/// observation matrix.
std::string trajectory_to_json(const Trajectory& traj);
Trajectory trajectory_from_json(const std::string& text);

std::string matrix_to_json_text(const Eigen::MatrixXd& M);
Eigen::MatrixXd matrix_from_json_text(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace netinfer
