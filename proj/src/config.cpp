#include "stoqease/config.hpp"

#include <cmath>
#include <set>
#include <sstream>

namespace stoqease {

using nlohmann::json;

namespace {

struct KindName {
  ExperimentKind kind;
  const char* name;
};

constexpr KindName kKindNames[] = {
    {ExperimentKind::benchmark_random, "benchmark_random"},
    {ExperimentKind::jmodel_sweep, "jmodel_sweep"},
    {ExperimentKind::ladder_sweep, "ladder_sweep"},
    {ExperimentKind::sign_study, "sign_study"},
    {ExperimentKind::maxcut_verify, "maxcut_verify"},
    {ExperimentKind::maxcut_embed, "maxcut_embed"},
    {ExperimentKind::measure, "measure"},
    {ExperimentKind::optimize, "optimize"},
    {ExperimentKind::avgsign, "avgsign"},
};

// Reads the fields of one JSON object and rejects keys nobody asked for.
class Fields {
 public:
  Fields(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw InvalidArgument(where_ + ": expected a JSON object");
  }

  template <class T>
  void read(const char* key, T& out) {
    seen_.insert(key);
    if (!j_.contains(key) || j_.at(key).is_null()) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception& e) {
      throw InvalidArgument(where_ + "." + key + ": " + e.what());
    }
  }

  template <class T>
  void read(const char* key, std::optional<T>& out) {
    seen_.insert(key);
    if (!j_.contains(key) || j_.at(key).is_null()) return;
    T value{};
    read(key, value);
    out = value;
  }

  const json* sub(const char* key) {
    seen_.insert(key);
    return j_.contains(key) && !j_.at(key).is_null() ? &j_.at(key) : nullptr;
  }

  std::string path(const char* key) const { return where_ + "." + key; }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.contains(key)) throw InvalidArgument(where_ + ": unknown key '" + key + "'");
    }
  }

 private:
  const json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

InitKind init_from_string(const std::string& s) {
  if (s == "identity") return InitKind::identity;
  if (s == "perturbed_identity") return InitKind::perturbed_identity;
  if (s == "haar_random") return InitKind::haar_random;
  throw InvalidArgument("unknown optimizer init '" + s + "'");
}

const char* to_string(InitKind k) {
  switch (k) {
    case InitKind::identity: return "identity";
    case InitKind::perturbed_identity: return "perturbed_identity";
    case InitKind::haar_random: return "haar_random";
  }
  return "?";
}

MeasureMode mode_from_string(const std::string& s) {
  if (s == "dense") return MeasureMode::dense;
  if (s == "closed_form_2local") return MeasureMode::closed_form_2local;
  if (s == "effective_local") return MeasureMode::effective_local;
  if (s == "smooth") return MeasureMode::smooth;
  throw InvalidArgument("unknown measure mode '" + s + "'");
}

const char* to_string(MeasureMode m) {
  switch (m) {
    case MeasureMode::dense: return "dense";
    case MeasureMode::closed_form_2local: return "closed_form_2local";
    case MeasureMode::effective_local: return "effective_local";
    case MeasureMode::smooth: return "smooth";
  }
  return "?";
}

Normalization normalization_from_string(const std::string& s) {
  if (s == "per_dimension") return Normalization::per_dimension;
  if (s == "raw_sum") return Normalization::raw_sum;
  throw InvalidArgument("unknown normalization '" + s + "'");
}

void read_model(const json& j, ModelConfig& m) {
  Fields f(j, "model");
  f.read("type", m.type);
  f.read("n_rungs", m.n_rungs);
  f.read("j_par", m.j_par);
  f.read("j_perp", m.j_perp);
  f.read("j_cross", m.j_cross);
  f.read("j0", m.j0);
  f.read("j1", m.j1);
  f.read("j2", m.j2);
  f.read("j3", m.j3);
  f.read("local_dim", m.local_dim);
  f.read("n_sites", m.n_sites);
  f.read("path", m.path);
  f.read("local_dims", m.local_dims);
  f.read("n_qubits", m.n_qubits);
  if (const json* terms = f.sub("terms")) {
    if (!terms->is_array()) throw InvalidArgument("model.terms: expected an array");
    m.terms.clear();
    for (const json& t : *terms) {
      Fields tf(t, "model.terms[]");
      CoefficientTerm term;
      tf.read("kind", term.kind);
      tf.read("i", term.i);
      tf.read("j", term.j);
      tf.read("w", term.w);
      tf.finish();
      m.terms.push_back(term);
    }
  }
  f.finish();
}

void read_optimizer(const json& j, OptimizerConfig& o) {
  Fields f(j, "optimizer");
  f.read("max_iters", o.max_iters);
  f.read("gradient_tolerance", o.gradient_tolerance);
  f.read("restart_period", o.restart_period);
  std::optional<std::string> init;
  f.read("init", init);
  if (init) o.init = init_from_string(*init);
  f.read("perturbation", o.perturbation);
  f.read("alpha", o.alpha);
  f.read("restarts", o.restarts);
  if (const json* ls = f.sub("line_search")) {
    Fields lf(*ls, "optimizer.line_search");
    lf.read("backtracking_factor", o.line_search.backtracking_factor);
    lf.read("sufficient_decrease", o.line_search.sufficient_decrease);
    lf.read("max_halvings", o.line_search.max_halvings);
    lf.finish();
  }
  f.finish();
}

void read_grid(const json& j, std::vector<GridAxis>& grid) {
  if (!j.is_array()) throw InvalidArgument("grid: expected an array of axes");
  grid.clear();
  for (const json& a : j) {
    Fields f(a, "grid[]");
    GridAxis axis;
    f.read("name", axis.name);
    f.read("min", axis.min);
    f.read("max", axis.max);
    f.read("steps", axis.steps);
    f.finish();
    grid.push_back(axis);
  }
}

}  // namespace

const char* to_string(ExperimentKind k) {
  for (const auto& [kind, name] : kKindNames) {
    if (kind == k) return name;
  }
  return "?";
}

ExperimentKind experiment_from_string(const std::string& s) {
  for (const auto& [kind, name] : kKindNames) {
    if (s == name) return kind;
  }
  throw InvalidArgument("unknown experiment '" + s + "'");
}

double GridAxis::value(int i) const {
  if (i < 0 || i >= steps) throw InvalidArgument("GridAxis::value: index out of range");
  if (steps == 1) return min;
  return min + (max - min) * static_cast<double>(i) / static_cast<double>(steps - 1);
}

GridAxis parse_grid_override(const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw InvalidArgument("grid override '" + spec + "' must look like name=min:max:steps");
  }
  GridAxis axis;
  axis.name = spec.substr(0, eq);
  std::string rest = spec.substr(eq + 1);
  for (char& c : rest) {
    if (c == ':') c = ' ';
  }
  std::istringstream in(rest);
  std::string extra;
  if (!(in >> axis.min >> axis.max >> axis.steps) || (in >> extra)) {
    throw InvalidArgument("grid override '" + spec + "' must look like name=min:max:steps");
  }
  if (axis.steps < 1) throw InvalidArgument("grid override '" + spec + "': steps must be >= 1");
  if (axis.max < axis.min) throw InvalidArgument("grid override '" + spec + "': max must be >= min");
  return axis;
}

void ExperimentConfig::apply_grid_override(const GridAxis& axis) {
  for (auto& a : grid) {
    if (a.name == axis.name) {
      a = axis;
      return;
    }
  }
  grid.push_back(axis);
}

void ExperimentConfig::validate() const {
  qmc.validate();
  optimizer.validate();
  measure.validate();
  if (threads && *threads < 1) throw InvalidArgument("threads must be >= 1");
  if (output_dir.empty()) throw InvalidArgument("output directory must be non-empty");

  for (const auto& a : grid) {
    if (a.steps < 1) throw InvalidArgument("grid axis '" + a.name + "': steps must be >= 1");
    if (!std::isfinite(a.min) || !std::isfinite(a.max)) {
      throw InvalidArgument("grid axis '" + a.name + "': bounds must be finite");
    }
    if (a.max < a.min) throw InvalidArgument("grid axis '" + a.name + "': max must be >= min");
  }
  auto require_axes = [&](const char* x, const char* y) {
    if (grid.size() != 2 || grid[0].name != x || grid[1].name != y) {
      throw InvalidArgument(std::string("grid must have exactly the axes '") + x + "' and '" + y + "'");
    }
    for (const auto& a : grid) {
      if (a.min < 0.0 || a.max < 0.0) throw InvalidArgument("grid axis '" + a.name + "': couplings must be >= 0");
    }
  };
  switch (experiment) {
    case ExperimentKind::jmodel_sweep:
      require_axes("j2", "j3");
      break;
    case ExperimentKind::ladder_sweep:
      require_axes("j_perp", "j_cross");
      break;
    case ExperimentKind::benchmark_random:
      if (benchmark.dims.empty()) throw InvalidArgument("benchmark.dims must be non-empty");
      for (int d : benchmark.dims) {
        if (d < 2 || d > 8) throw InvalidArgument("benchmark.dims entries must lie in [2, 8]");
      }
      if (benchmark.instances < 1) throw InvalidArgument("benchmark.instances must be >= 1");
      if (!(benchmark.tolerance > 0.0)) throw InvalidArgument("benchmark.tolerance must be positive");
      break;
    case ExperimentKind::sign_study:
      if (sign_study.instances < 1) throw InvalidArgument("sign_study.instances must be >= 1");
      if (sign_study.n_sites < 3 || sign_study.n_sites > 12) {
        throw InvalidArgument("sign_study.n_sites must lie in [3, 12]");
      }
      if (sign_study.alpha_steps < 2) throw InvalidArgument("sign_study.alpha_steps must be >= 2");
      if (!(sign_study.alpha_min >= 0.0 && sign_study.alpha_max > sign_study.alpha_min)) {
        throw InvalidArgument("sign_study needs 0 <= alpha_min < alpha_max");
      }
      break;
    case ExperimentKind::maxcut_verify:
    case ExperimentKind::maxcut_embed: {
      const int sources = (maxcut.graph_path.empty() ? 0 : 1) + (maxcut.edges.empty() ? 0 : 1) +
                          (maxcut.all_connected_upto > 0 ? 1 : 0);
      if (sources != 1) {
        throw InvalidArgument("maxcut needs exactly one of graph_path, edges, all_connected_upto");
      }
      if (experiment == ExperimentKind::maxcut_embed && maxcut.all_connected_upto > 0) {
        throw InvalidArgument("embed-maxcut takes a single graph");
      }
      if (maxcut.all_connected_upto > 5) throw InvalidArgument("maxcut.all_connected_upto must be <= 5");
      if (maxcut.qubit_cap < 1 || maxcut.qubit_cap > 10) throw InvalidArgument("maxcut.qubit_cap must lie in [1, 10]");
      break;
    }
    case ExperimentKind::measure:
    case ExperimentKind::optimize:
    case ExperimentKind::avgsign:
      break;
  }
}

ExperimentConfig default_config(ExperimentKind kind) {
  ExperimentConfig c;
  c.experiment = kind;
  switch (kind) {
    case ExperimentKind::benchmark_random:
      c.optimizer.alpha = 50.0;
      c.optimizer.init = InitKind::haar_random;
      break;
    case ExperimentKind::jmodel_sweep:
      c.model.type = "jmodel";
      c.optimizer.alpha = 100.0;
      c.optimizer.init = InitKind::haar_random;
      c.grid = {{"j2", 0.0, 2.0, 21}, {"j3", 0.0, 2.0, 21}};
      break;
    case ExperimentKind::ladder_sweep:
      c.model.type = "frustrated";
      c.optimizer.alpha = 40.0;
      c.optimizer.init = InitKind::perturbed_identity;
      c.grid = {{"j_perp", 0.0, 2.0, 21}, {"j_cross", 0.0, 2.0, 21}};
      break;
    case ExperimentKind::optimize:
      c.optimizer.alpha = 40.0;
      c.optimizer.init = InitKind::perturbed_identity;
      break;
    default:
      break;
  }
  return c;
}

ExperimentConfig config_from_json(const json& j, std::optional<ExperimentKind> kind) {
  Fields f(j, "config");
  std::optional<std::string> name;
  f.read("experiment", name);
  ExperimentKind k;
  if (kind && name && experiment_from_string(*name) != *kind) {
    throw InvalidArgument("config experiment '" + *name + "' does not match the subcommand '" +
                          to_string(*kind) + "'");
  }
  if (kind) k = *kind;
  else if (name) k = experiment_from_string(*name);
  else throw InvalidArgument("config: missing 'experiment'");

  ExperimentConfig c = default_config(k);
  f.read("seed", c.seed);
  f.read("threads", c.threads);
  f.read("output_dir", c.output_dir);
  if (const json* m = f.sub("model")) read_model(*m, c.model);
  if (const json* g = f.sub("grid")) read_grid(*g, c.grid);
  if (const json* q = f.sub("qmc")) {
    Fields qf(*q, "qmc");
    qf.read("beta", c.qmc.beta);
    qf.read("m", c.qmc.m);
    qf.finish();
  }
  if (const json* o = f.sub("optimizer")) read_optimizer(*o, c.optimizer);
  if (const json* m = f.sub("measure")) {
    Fields mf(*m, "measure");
    mf.read("p", c.measure.p);
    std::optional<std::string> mode, norm;
    mf.read("mode", mode);
    if (mode) c.measure.mode = mode_from_string(*mode);
    mf.read("alpha", c.measure.alpha);
    mf.read("normalization", norm);
    if (norm) c.measure.normalization = normalization_from_string(*norm);
    mf.finish();
  }
  if (const json* b = f.sub("benchmark")) {
    Fields bf(*b, "benchmark");
    bf.read("dims", c.benchmark.dims);
    bf.read("instances", c.benchmark.instances);
    bf.read("tolerance", c.benchmark.tolerance);
    bf.finish();
  }
  if (const json* s = f.sub("sign_study")) {
    Fields sf(*s, "sign_study");
    sf.read("instances", c.sign_study.instances);
    sf.read("n_sites", c.sign_study.n_sites);
    sf.read("alpha_min", c.sign_study.alpha_min);
    sf.read("alpha_max", c.sign_study.alpha_max);
    sf.read("alpha_steps", c.sign_study.alpha_steps);
    sf.finish();
  }
  if (const json* m = f.sub("maxcut")) {
    Fields mf(*m, "maxcut");
    mf.read("graph_path", c.maxcut.graph_path);
    mf.read("edges", c.maxcut.edges);
    mf.read("n_vertices", c.maxcut.n_vertices);
    mf.read("penalty", c.maxcut.penalty);
    mf.read("all_connected_upto", c.maxcut.all_connected_upto);
    mf.read("qubit_cap", c.maxcut.qubit_cap);
    mf.finish();
  }
  f.finish();
  return c;
}

json config_to_json(const ExperimentConfig& c) {
  json j;
  j["experiment"] = to_string(c.experiment);
  j["seed"] = c.seed;
  j["threads"] = c.threads ? json(*c.threads) : json(nullptr);
  j["output_dir"] = c.output_dir;

  const ModelConfig& m = c.model;
  json terms = json::array();
  for (const auto& t : m.terms) terms.push_back({{"kind", t.kind}, {"i", t.i}, {"j", t.j}, {"w", t.w}});
  j["model"] = {{"type", m.type},       {"n_rungs", m.n_rungs},     {"j_par", m.j_par},   {"j_perp", m.j_perp},
                {"j_cross", m.j_cross}, {"j0", m.j0},               {"j1", m.j1},         {"j2", m.j2},
                {"j3", m.j3},           {"local_dim", m.local_dim}, {"n_sites", m.n_sites}, {"path", m.path},
                {"local_dims", m.local_dims}, {"n_qubits", m.n_qubits}, {"terms", terms}};

  json grid = json::array();
  for (const auto& a : c.grid) grid.push_back({{"name", a.name}, {"min", a.min}, {"max", a.max}, {"steps", a.steps}});
  j["grid"] = grid;
  j["qmc"] = {{"beta", c.qmc.beta}, {"m", c.qmc.m}};

  const OptimizerConfig& o = c.optimizer;
  j["optimizer"] = {{"max_iters", o.max_iters},
                    {"gradient_tolerance", o.gradient_tolerance},
                    {"restart_period", o.restart_period},
                    {"init", to_string(o.init)},
                    {"perturbation", o.perturbation},
                    {"alpha", o.alpha},
                    {"restarts", o.restarts},
                    {"line_search",
                     {{"backtracking_factor", o.line_search.backtracking_factor},
                      {"sufficient_decrease", o.line_search.sufficient_decrease},
                      {"max_halvings", o.line_search.max_halvings}}}};
  j["measure"] = {{"p", c.measure.p},
                  {"mode", to_string(c.measure.mode)},
                  {"alpha", c.measure.alpha ? json(*c.measure.alpha) : json(nullptr)},
                  {"normalization", c.measure.normalization == Normalization::per_dimension ? "per_dimension" : "raw_sum"}};
  j["benchmark"] = {{"dims", c.benchmark.dims}, {"instances", c.benchmark.instances}, {"tolerance", c.benchmark.tolerance}};
  j["sign_study"] = {{"instances", c.sign_study.instances},
                     {"n_sites", c.sign_study.n_sites},
                     {"alpha_min", c.sign_study.alpha_min},
                     {"alpha_max", c.sign_study.alpha_max},
                     {"alpha_steps", c.sign_study.alpha_steps}};
  j["maxcut"] = {{"graph_path", c.maxcut.graph_path},
                 {"edges", c.maxcut.edges},
                 {"n_vertices", c.maxcut.n_vertices ? json(*c.maxcut.n_vertices) : json(nullptr)},
                 {"penalty", c.maxcut.penalty ? json(*c.maxcut.penalty) : json(nullptr)},
                 {"all_connected_upto", c.maxcut.all_connected_upto},
                 {"qubit_cap", c.maxcut.qubit_cap}};
  return j;
}

}  // namespace stoqease
