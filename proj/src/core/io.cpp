#include "core/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "core/errors.hpp"

namespace netinfer {

using nlohmann::json;

namespace {

Eigen::MatrixXd matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty())
    throw DimensionError("expected a non-empty array of arrays");
  const auto rows = j.size();
  const auto cols = j.at(0).size();
  Eigen::MatrixXd M(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const auto& row = j.at(i);
    if (row.size() != cols) throw DimensionError("ragged matrix rows");
    for (std::size_t k = 0; k < cols; ++k) M(i, k) = row.at(k).get<double>();
  }
  return M;
}

json matrix_to_json(const Eigen::MatrixXd& M) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
    rows.push_back(row);
  }
  return rows;
}

Eigen::VectorXd vector_from_json(const json& j) {
  Eigen::VectorXd v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v(i) = j.at(i).get<double>();
  return v;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

SystemSpec system_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw DimensionError(std::string("invalid system JSON: ") + e.what());
  }
  SystemSpec spec;
  try {
    spec.graph.adjacency = matrix_from_json(j.at("adjacency"));
    spec.nodal.A = matrix_from_json(j.at("A"));
    spec.nodal.B = matrix_from_json(j.at("B"));
    spec.nodal.K = matrix_from_json(j.at("K"));
    spec.tau = j.value("tau", 0.05);
    if (j.contains("Q")) spec.Q = matrix_from_json(j.at("Q"));
    if (j.contains("P")) spec.P = matrix_from_json(j.at("P"));
    if (j.contains("R")) spec.R = matrix_from_json(j.at("R"));
  } catch (const json::exception& e) {
    throw DimensionError(std::string("invalid system JSON: ") + e.what());
  }
  spec.graph.validate();
  spec.nodal.validate();
  return spec;
}

std::string system_to_json(const SystemSpec& spec) {
  json j;
  j["adjacency"] = matrix_to_json(spec.graph.adjacency);
  j["A"] = matrix_to_json(spec.nodal.A);
  j["B"] = matrix_to_json(spec.nodal.B);
  j["K"] = matrix_to_json(spec.nodal.K);
  j["tau"] = spec.tau;
  if (spec.Q) j["Q"] = matrix_to_json(*spec.Q);
  if (spec.P) j["P"] = matrix_to_json(*spec.P);
  if (spec.R) j["R"] = matrix_to_json(*spec.R);
  return j.dump(2);
}

std::string trajectory_to_csv(const Trajectory& traj) {
  std::string out = "k,t,node,dim,value\n";
  char buf[96];
  for (Eigen::Index k = 0; k < traj.observations.cols(); ++k)
    for (int node = 0; node < traj.n_nodes; ++node)
      for (int d = 0; d < traj.state_dim; ++d) {
        std::snprintf(buf, sizeof(buf), "%lld,%s,%d,%d,%s\n",
                      static_cast<long long>(k),
                      format_double(k * traj.tau).c_str(), node, d,
                      format_double(
                          traj.observations(node * traj.state_dim + d, k))
                          .c_str());
        out += buf;
      }
  return out;
}

Trajectory trajectory_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line))
    throw DimensionError("empty trajectory CSV");
  long max_k = -1;
  int max_node = -1, max_dim = -1;
  struct Row {
    long k;
    int node, dim;
    double t, value;
  };
  std::vector<Row> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    Row r;
    if (std::sscanf(line.c_str(), "%ld,%lf,%d,%d,%lf", &r.k, &r.t, &r.node,
                    &r.dim, &r.value) != 5)
      throw DimensionError("bad trajectory CSV row: " + line);
    max_k = std::max(max_k, r.k);
    max_node = std::max(max_node, r.node);
    max_dim = std::max(max_dim, r.dim);
    rows.push_back(r);
  }
  if (max_k < 1 || max_node < 0 || max_dim < 0)
    throw DimensionError("trajectory CSV must contain at least two samples");
  Trajectory traj;
  traj.n_nodes = max_node + 1;
  traj.state_dim = max_dim + 1;
  traj.observations.resize(traj.n_nodes * traj.state_dim, max_k + 1);
  traj.observations.setZero();
  double tau = 0.0;
  for (const auto& r : rows) {
    traj.observations(r.node * traj.state_dim + r.dim, r.k) = r.value;
    if (r.k == 1) tau = r.t;
  }
  traj.tau = tau;
  return traj;
}

std::string trajectory_to_json(const Trajectory& traj) {
  json j;
  j["tau"] = traj.tau;
  j["seed"] = traj.seed;
  j["rng"] = traj.rng;
  j["n_nodes"] = traj.n_nodes;
  j["state_dim"] = traj.state_dim;
  json sigma = json::array();
  for (Eigen::Index i = 0; i < traj.noise.sigma.size(); ++i)
    sigma.push_back(traj.noise.sigma(i));
  j["sigma"] = sigma;
  // columns y(0..T) serialized row-major as (T+1) x (Nn)
  j["observations"] = matrix_to_json(traj.observations.transpose());
  return j.dump();
}

Trajectory trajectory_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw DimensionError(std::string("invalid trajectory JSON: ") + e.what());
  }
  Trajectory traj;
  try {
    traj.tau = j.at("tau").get<double>();
    traj.seed = j.value("seed", std::uint64_t{0});
    traj.rng = j.value("rng", std::string(GaussianSampler::algorithm()));
    traj.n_nodes = j.at("n_nodes").get<int>();
    traj.state_dim = j.at("state_dim").get<int>();
    traj.noise.sigma = vector_from_json(j.value("sigma", json::array()));
    traj.observations = matrix_from_json(j.at("observations")).transpose();
  } catch (const json::exception& e) {
    throw DimensionError(std::string("invalid trajectory JSON: ") + e.what());
  }
  if (traj.observations.rows() != traj.n_nodes * traj.state_dim)
    throw DimensionError("observation dimension does not match n_nodes * n");
  return traj;
}

std::string matrix_to_json_text(const Eigen::MatrixXd& M) {
  return matrix_to_json(M).dump();
}

Eigen::MatrixXd matrix_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
    if (j.is_object() && j.contains("matrix")) j = j.at("matrix");
    return matrix_from_json(j);
  } catch (const json::exception& e) {
    throw DimensionError(std::string("invalid matrix JSON: ") + e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DimensionError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DimensionError("cannot write file: " + path);
  out << content;
}

}  // namespace netinfer
