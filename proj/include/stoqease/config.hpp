#pragma once

#include "stoqease/measures.hpp"
#include "stoqease/optimizer.hpp"
#include "stoqease/qmc.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace stoqease {

enum class ExperimentKind {
  benchmark_random,
  jmodel_sweep,
  ladder_sweep,
  sign_study,
  maxcut_verify,
  maxcut_embed,
  measure,
  optimize,
  avgsign,
};

const char* to_string(ExperimentKind k);
ExperimentKind experiment_from_string(const std::string& s);

struct GridAxis {
  std::string name;
  double min = 0.0;
  double max = 2.0;
  int steps = 21;

  double value(int i) const;
};

/// Parses "name=min:max:steps".
GridAxis parse_grid_override(const std::string& spec);

struct CoefficientTerm {
  std::string kind;  ///< xx, yy, zz, xz, x, z
  int i = 0;
  int j = -1;        ///< unused for fields
  double w = 0.0;
};

/// Model selection for measure / avgsign / optimize.
struct ModelConfig {
  /// frustrated, jmodel, random_stoquastic, term_file, matrix_file, coefficients
  std::string type = "frustrated";
  int n_rungs = 4;
  double j_par = 1.0, j_perp = 1.0, j_cross = 1.0;
  double j0 = 1.0, j1 = 1.0, j2 = 1.0, j3 = 1.0;
  int local_dim = 2;                 ///< random_stoquastic and term_file
  int n_sites = 4;                   ///< chain length for term-based models
  std::string path;                  ///< term_file / matrix_file
  std::vector<int> local_dims;       ///< matrix_file; empty means qubits
  int n_qubits = 0;                  ///< coefficients
  std::vector<CoefficientTerm> terms;
};

struct BenchmarkConfig {
  std::vector<int> dims{2, 3, 4};
  int instances = 50;
  double tolerance = 1e-5;  ///< relative to max|h|
};

struct SignStudyConfig {
  int instances = 50;
  int n_sites = 5;
  double alpha_min = 1.0;
  double alpha_max = 50.0;
  int alpha_steps = 20;
};

struct MaxCutConfig {
  std::string graph_path;
  std::vector<Edge> edges;
  std::optional<int> n_vertices;
  std::optional<double> penalty;
  int all_connected_upto = 0;  ///< > 0 enumerates every connected graph on 2..N vertices
  int qubit_cap = 8;
};

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::measure;
  std::uint64_t seed = 1;
  std::optional<int> threads;
  std::string output_dir = "out";
  ModelConfig model;
  std::vector<GridAxis> grid;
  QmcParams qmc;
  OptimizerConfig optimizer;
  MeasureSpec measure;
  BenchmarkConfig benchmark;
  SignStudyConfig sign_study;
  MaxCutConfig maxcut;

  /// Throws InvalidArgument on any inconsistency.
  void validate() const;
  /// Replaces the axis with the same name, or appends it.
  void apply_grid_override(const GridAxis& axis);
};

/// Experiment-specific defaults (optimizer alpha, init, grid axes) applied
/// before the JSON fields are read.
ExperimentConfig default_config(ExperimentKind kind);

/// Unknown keys are rejected so that typos do not silently fall back to
/// defaults.
ExperimentConfig config_from_json(const nlohmann::json& j, std::optional<ExperimentKind> kind = std::nullopt);
nlohmann::json config_to_json(const ExperimentConfig& c);

}  // namespace stoqease
