#include "stoqease/config.hpp"
#include "stoqease/experiments.hpp"
#include "stoqease/parallel.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

using namespace stoqease;

namespace {

struct CommonOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<int> threads;
  std::vector<std::string> grid;
};

struct CommandOptions {
  std::string input;             // matrix file for measure / avgsign
  std::vector<int> local_dims;
  std::optional<double> beta;
  std::optional<int> m;
  std::optional<double> p;
  std::string mode;
  std::optional<double> alpha;
  std::string sweep_model;       // jmodel or ladder
  std::string graph;
  std::optional<int> all_connected;
  std::optional<double> penalty;
  std::vector<int> dims;
  std::optional<int> instances;
  std::optional<int> restarts;
};

void add_common(CLI::App* sub, CommonOptions& o) {
  sub->add_option("--config", o.config_path, "JSON experiment configuration")->check(CLI::ExistingFile);
  sub->add_option("--seed", o.seed, "master seed (u64)");
  sub->add_option("--out", o.out, "output directory");
  sub->add_option("--threads", o.threads, "worker threads (default: STOQEASE_THREADS, then all cores)")
      ->check(CLI::PositiveNumber);
  sub->add_option("--grid", o.grid, "grid override axis=min:max:steps (repeatable)");
}

ExperimentConfig load_config(const CommonOptions& o, ExperimentKind kind, bool kind_from_file) {
  if (o.config_path.empty()) return default_config(kind);
  std::ifstream in(o.config_path);
  if (!in) throw InvalidArgument("cannot open config '" + o.config_path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidArgument(std::string("config is not valid JSON: ") + e.what());
  }
  if (kind_from_file && j.contains("experiment")) return config_from_json(j);
  return config_from_json(j, kind);
}

ExperimentKind sweep_kind(const std::string& model) {
  if (model == "jmodel") return ExperimentKind::jmodel_sweep;
  if (model == "ladder" || model == "frustrated") return ExperimentKind::ladder_sweep;
  throw InvalidArgument("--model must be 'jmodel' or 'ladder'");
}

void apply_command_options(ExperimentConfig& c, const CommandOptions& o) {
  if (!o.input.empty()) {
    c.model.type = "matrix_file";
    c.model.path = o.input;
    c.model.local_dims = o.local_dims;
  }
  if (o.beta) c.qmc.beta = *o.beta;
  if (o.m) c.qmc.m = *o.m;
  if (o.p) c.measure.p = *o.p;
  if (!o.mode.empty()) {
    nlohmann::json j = config_to_json(c);
    j["measure"]["mode"] = o.mode;
    c.measure = config_from_json(j).measure;
  }
  if (o.alpha) {
    if (c.experiment == ExperimentKind::measure) c.measure.alpha = *o.alpha;
    else c.optimizer.alpha = *o.alpha;
  }
  if (!o.graph.empty()) {
    c.maxcut.graph_path = o.graph;
    c.maxcut.edges.clear();
    c.maxcut.all_connected_upto = 0;
  }
  if (o.all_connected) {
    c.maxcut.all_connected_upto = *o.all_connected;
    c.maxcut.graph_path.clear();
    c.maxcut.edges.clear();
  }
  if (o.penalty) c.maxcut.penalty = *o.penalty;
  if (!o.dims.empty()) c.benchmark.dims = o.dims;
  if (o.instances) {
    c.benchmark.instances = *o.instances;
    c.sign_study.instances = *o.instances;
  }
  if (o.restarts) c.optimizer.restarts = *o.restarts;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stoqease: non-stoquasticity measures, average signs and basis optimisation"};
  app.require_subcommand(1);
  CommonOptions common;
  CommandOptions cmd;

  auto* measure = app.add_subcommand("measure", "non-stoquasticity of one model");
  auto* avgsign = app.add_subcommand("avgsign", "exact world-line average sign of one model");
  auto* optimize = app.add_subcommand("optimize", "optimise an on-site orthogonal basis for one model");
  auto* sweep = app.add_subcommand("sweep", "phase-diagram sweep over a two-axis coupling grid");
  auto* sign_study = app.add_subcommand("sign-study", "average sign versus non-stoquasticity on random chains");
  auto* embed = app.add_subcommand("embed-maxcut", "print the MaxCut embedding of a graph");
  auto* verify = app.add_subcommand("verify-reduction", "brute-force checks of the MaxCut reduction");
  auto* bench = app.add_subcommand("benchmark-random", "recover hidden stoquastic bases of random terms");

  for (auto* sub : {measure, avgsign, optimize, sweep, sign_study, embed, verify, bench}) add_common(sub, common);
  for (auto* sub : {measure, avgsign}) {
    sub->add_option("--input", cmd.input, "dense matrix text file")->check(CLI::ExistingFile);
    sub->add_option("--local-dims", cmd.local_dims, "local dimensions of the input (default: qubits)");
  }
  for (auto* sub : {avgsign, optimize, sweep, sign_study}) {
    sub->add_option("--beta", cmd.beta, "inverse temperature");
    sub->add_option("--m", cmd.m, "Trotter steps");
  }
  measure->add_option("--p", cmd.p, "l_p exponent");
  measure->add_option("--mode", cmd.mode, "dense, smooth, effective_local or closed_form_2local");
  measure->add_option("--alpha", cmd.alpha, "softplus sharpness for the smooth mode");
  for (auto* sub : {optimize, sweep, bench}) {
    sub->add_option("--alpha", cmd.alpha, "softplus sharpness of the smooth objective");
    sub->add_option("--restarts", cmd.restarts, "independent initial points per optimisation");
  }
  sweep->add_option("--model", cmd.sweep_model, "jmodel or ladder");
  for (auto* sub : {embed, verify}) {
    sub->add_option("--graph", cmd.graph, "edge-list file")->check(CLI::ExistingFile);
    sub->add_option("--penalty", cmd.penalty, "penalty constant C (embed-maxcut only)");
  }
  verify->add_option("--all-connected", cmd.all_connected, "check every connected graph on 2..N vertices");
  bench->add_option("--dims", cmd.dims, "local dimensions");
  for (auto* sub : {bench, sign_study}) sub->add_option("--instances", cmd.instances, "instances per setting");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalidConfig;
  }

  try {
    ExperimentConfig c;
    CLI::App* sub = app.get_subcommands().front();
    if (sub == sweep) {
      if (cmd.sweep_model.empty()) {
        c = load_config(common, ExperimentKind::ladder_sweep, true);
        if (c.experiment != ExperimentKind::ladder_sweep && c.experiment != ExperimentKind::jmodel_sweep) {
          throw InvalidArgument("sweep needs a jmodel_sweep or ladder_sweep config");
        }
      } else {
        c = load_config(common, sweep_kind(cmd.sweep_model), false);
      }
    } else {
      const ExperimentKind kind = sub == measure      ? ExperimentKind::measure
                                  : sub == avgsign    ? ExperimentKind::avgsign
                                  : sub == optimize   ? ExperimentKind::optimize
                                  : sub == sign_study ? ExperimentKind::sign_study
                                  : sub == embed      ? ExperimentKind::maxcut_embed
                                  : sub == verify     ? ExperimentKind::maxcut_verify
                                                      : ExperimentKind::benchmark_random;
      c = load_config(common, kind, false);
    }
    if (sub == verify && cmd.graph.empty() && !cmd.all_connected && common.config_path.empty()) {
      c.maxcut.all_connected_upto = 4;
    }
    if (sub != embed && cmd.penalty) throw InvalidArgument("--penalty applies to embed-maxcut only");
    apply_command_options(c, cmd);
    if (common.seed) c.seed = *common.seed;
    if (!common.out.empty()) c.output_dir = common.out;
    if (common.threads) c.threads = common.threads;
    for (const auto& g : common.grid) c.apply_grid_override(parse_grid_override(g));
    c.validate();
    const int threads = resolve_threads(c.threads);

    const auto t0 = std::chrono::steady_clock::now();
    const ExperimentResult r = run_experiment(c, threads);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const int code = write_artifacts(c, r, threads, wall);

    std::cout << to_string(c.experiment) << ": " << r.summary.dump() << "\n";
    std::cout << "artifacts written to " << c.output_dir << "\n";
    for (const auto& d : r.diagnostics) std::cerr << "diagnostic: " << d << "\n";
    if (code == kExitNumerical) std::cerr << "error: run finished with numerical failures or grid gaps\n";
    return code;
  } catch (const InvalidArgument& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return kExitInvalidConfig;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return kExitInvalidConfig;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}
