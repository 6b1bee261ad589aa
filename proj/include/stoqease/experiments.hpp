#pragma once

#include "stoqease/config.hpp"
#include "stoqease/hamiltonian.hpp"
#include "stoqease/hardness.hpp"
#include "stoqease/io.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

namespace stoqease {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kExitOk = 0, kExitInvalidConfig = 1, kExitNumerical = 2 };

std::uint64_t splitmix64(std::uint64_t x);
/// Seed of one grid point or instance; independent of execution order.
std::uint64_t derived_seed(std::uint64_t master, std::initializer_list<std::int64_t> coords);

/// A model resolved from its configuration. Fields that do not apply to
/// the model type are empty.
struct ResolvedModel {
  std::string label;
  std::optional<TwoSiteTerm> term;
  std::optional<CoefficientGraph> coefficients;
  std::optional<DenseOperator> dense;
};

ResolvedModel resolve_model(const ModelConfig& m, std::uint64_t seed, bool need_dense);

struct NamedTable {
  std::string file;
  CsvTable table;
};

struct NamedText {
  std::string file;
  std::string contents;
};

struct ExperimentResult {
  std::vector<NamedTable> tables;
  std::vector<PlotGrid> plots;
  std::vector<NamedText> extra;
  nlohmann::json summary = nlohmann::json::object();
  std::vector<std::string> diagnostics;  ///< numerical failures, one line each
  bool numerical_failure = false;
};

ExperimentResult run_experiment(const ExperimentConfig& c, int threads);

/// Writes tables, plot data and manifest.json into c.output_dir. Returns
/// kExitNumerical when the result recorded a failure or a plot has gaps.
int write_artifacts(const ExperimentConfig& c, const ExperimentResult& r, int threads, double wall_seconds);

/// Every connected simple graph on n vertices (labelled, deduplicated up to
/// relabelling).
std::vector<MaxCutInstance> connected_graphs(int n);

}  // namespace stoqease
