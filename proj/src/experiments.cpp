#include "stoqease/experiments.hpp"

#include "stoqease/measures.hpp"
#include "stoqease/optimizer.hpp"
#include "stoqease/parallel.hpp"
#include "stoqease/qmc.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

namespace stoqease {

using nlohmann::json;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derived_seed(std::uint64_t master, std::initializer_list<std::int64_t> coords) {
  std::uint64_t h = splitmix64(master);
  for (std::int64_t c : coords) h = splitmix64(h ^ static_cast<std::uint64_t>(c));
  return h;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kDenseModelQubitLimit = 12;  // 4096 x 4096 dense matrices at most

DenseOperator chain_operator(const TwoSiteTerm& term, int n_sites) {
  const double dim = std::pow(static_cast<double>(term.local_dim()), n_sites);
  if (dim > std::ldexp(1.0, kDenseModelQubitLimit)) {
    throw InvalidArgument("model: dense chain dimension " + std::to_string(static_cast<long long>(dim)) +
                          " exceeds 4096");
  }
  return build_chain({n_sites, term});
}

CoefficientGraph coefficient_graph(const ModelConfig& m) {
  if (m.n_qubits < 1) throw InvalidArgument("model.n_qubits must be >= 1 for coefficients");
  CoefficientGraph g(m.n_qubits);
  for (const auto& t : m.terms) {
    if (t.kind == "xx") g.add_xx(t.i, t.j, t.w);
    else if (t.kind == "yy") g.add_yy(t.i, t.j, t.w);
    else if (t.kind == "zz") g.add_zz(t.i, t.j, t.w);
    else if (t.kind == "xz") g.add_xz(t.i, t.j, t.w);
    else if (t.kind == "x") g.add_x(t.i, t.w);
    else if (t.kind == "z") g.add_z(t.i, t.w);
    else throw InvalidArgument("model.terms: unknown kind '" + t.kind + "'");
  }
  return g;
}

}  // namespace

ResolvedModel resolve_model(const ModelConfig& m, std::uint64_t seed, bool need_dense) {
  ResolvedModel r;
  r.label = m.type;
  auto chain_from_term = [&](int n_sites) {
    if (need_dense) r.dense = chain_operator(*r.term, n_sites);
  };
  if (m.type == "frustrated" || m.type == "jmodel") {
    const LadderParams p = m.type == "frustrated" ? LadderParams::frustrated(m.j_par, m.j_perp, m.j_cross, m.n_rungs)
                                                  : LadderParams::jmodel(m.j0, m.j1, m.j2, m.j3, m.n_rungs);
    const ChainSpec spec = build_ladder(p);
    r.term = spec.term;
    chain_from_term(spec.n_sites);
  } else if (m.type == "random_stoquastic") {
    r.term = random_stoquastic_instance(m.local_dim, seed).scrambled;
    chain_from_term(m.n_sites);
  } else if (m.type == "term_file") {
    if (m.path.empty()) throw InvalidArgument("model.path is required for term_file");
    r.term = TwoSiteTerm(m.local_dim, read_matrix_file(m.path));
    chain_from_term(m.n_sites);
  } else if (m.type == "matrix_file") {
    if (m.path.empty()) throw InvalidArgument("model.path is required for matrix_file");
    r.dense = read_dense_operator(m.path, m.local_dims);
  } else if (m.type == "coefficients") {
    r.coefficients = coefficient_graph(m);
    if (need_dense) r.dense = build_coefficient_hamiltonian(*r.coefficients, kDenseModelQubitLimit);
  } else {
    throw InvalidArgument("unknown model type '" + m.type + "'");
  }
  return r;
}

namespace {

double log_inverse_sign(double sign) { return sign > kVanishingSign ? -std::log(sign) : kInf; }

// Ratio after/before that stays finite and NaN-free when "before" vanishes.
double improvement_ratio(double after, double before) {
  constexpr double kTiny = 1e-12;
  if (before <= kTiny) return after <= kTiny ? 1.0 : kInf;
  return after / before;
}

std::string edges_label(const MaxCutInstance& g) {
  std::string s;
  for (auto [i, j] : g.edges()) s += (s.empty() ? "" : ";") + std::to_string(i) + "-" + std::to_string(j);
  return s;
}

// ---- sweeps ----------------------------------------------------------------

struct SweepPoint {
  bool ok = false;
  std::string status;
  std::uint64_t seed = 0;
  double nu_before = 0, nu_after = 0, sign_before = 0, sign_after = 0;
  int iterations = 0;
  std::string selected;
};

ExperimentResult run_sweep(const ExperimentConfig& c, int threads) {
  const bool ladder = c.experiment == ExperimentKind::ladder_sweep;
  const GridAxis& ax = c.grid[0];
  const GridAxis& ay = c.grid[1];
  const int points = ax.steps * ay.steps;
  std::vector<SweepPoint> out(points);

  parallel_for(points, threads, [&](std::size_t k) {
    const int ix = static_cast<int>(k) % ax.steps;
    const int iy = static_cast<int>(k) / ax.steps;
    const double x = ax.value(ix), y = ay.value(iy);
    SweepPoint& p = out[k];
    p.seed = derived_seed(c.seed, {ix, iy});
    try {
      const LadderParams params = ladder ? LadderParams::frustrated(c.model.j_par, x, y, c.model.n_rungs)
                                         : LadderParams::jmodel(c.model.j0, c.model.j1, x, y, c.model.n_rungs);
      const ChainSpec spec = build_ladder(params);
      const DenseOperator h = build_chain(spec);
      p.nu_before = nu_p_dense(h, 1.0);
      p.sign_before = average_sign(h, c.qmc).value;
      OptimizerConfig oc = c.optimizer;
      oc.seed = p.seed;
      const OptimizationResult res = optimize(spec.term, oc);
      const DenseOperator rotated = conjugate_onsite(h, res.point);
      p.nu_after = nu_p_dense(rotated, 1.0);
      p.sign_after = average_sign(rotated, c.qmc).value;
      p.iterations = res.trace.total_iterations;
      p.selected = res.trace.selected;
      p.ok = std::isfinite(p.nu_before) && std::isfinite(p.nu_after) && std::isfinite(p.sign_before) &&
             std::isfinite(p.sign_after);
      p.status = p.ok ? "ok" : "non-finite result";
    } catch (const NumericalError& e) {
      p.status = std::string("numerical failure: ") + e.what();
    }
  });

  ExperimentResult r;
  CsvTable table({"ix", "iy", ax.name, ay.name, "seed", "nu1_before", "nu1_after", "nu1_ratio", "sign_before",
                  "sign_after", "log_inv_sign_before", "log_inv_sign_after", "log_sign_ratio", "iterations",
                  "selected", "status"});
  PlotGrid nu_ratio = make_plot_grid("nu1_ratio", ax, ay);
  PlotGrid sign_ratio = make_plot_grid("log_sign_ratio", ax, ay);
  PlotGrid before = make_plot_grid("log_inv_sign_before", ax, ay);
  PlotGrid after = make_plot_grid("log_inv_sign_after", ax, ay);
  const double nan = std::numeric_limits<double>::quiet_NaN();

  for (int k = 0; k < points; ++k) {
    const int ix = k % ax.steps, iy = k / ax.steps;
    const SweepPoint& p = out[k];
    if (!p.ok) {
      r.numerical_failure = true;
      r.diagnostics.push_back("grid point (" + std::to_string(ix) + ", " + std::to_string(iy) + "): " + p.status);
      table.add_row({std::int64_t{ix}, std::int64_t{iy}, ax.value(ix), ay.value(iy), std::to_string(p.seed), nan, nan,
                     nan, nan, nan, nan, nan, nan, std::int64_t{0}, std::string(), p.status});
      continue;
    }
    const double lb = log_inverse_sign(p.sign_before), la = log_inverse_sign(p.sign_after);
    const double nr = improvement_ratio(p.nu_after, p.nu_before), sr = improvement_ratio(la, lb);
    table.add_row({std::int64_t{ix}, std::int64_t{iy}, ax.value(ix), ay.value(iy), std::to_string(p.seed),
                   p.nu_before, p.nu_after, nr, p.sign_before, p.sign_after, lb, la, sr,
                   std::int64_t{p.iterations}, p.selected, p.status});
    nu_ratio.at(ix, iy) = nr;
    sign_ratio.at(ix, iy) = sr;
    before.at(ix, iy) = lb;
    after.at(ix, iy) = la;
  }
  r.tables.push_back({ladder ? "ladder_sweep.csv" : "jmodel_sweep.csv", std::move(table)});
  r.plots = {nu_ratio, sign_ratio, before, after};
  r.summary["points"] = points;
  return r;
}

// ---- benchmark -------------------------------------------------------------

ExperimentResult run_benchmark(const ExperimentConfig& c, int threads) {
  struct Job {
    int d, instance;
  };
  std::vector<Job> jobs;
  for (int d : c.benchmark.dims)
    for (int i = 0; i < c.benchmark.instances; ++i) jobs.push_back({d, i});

  struct Outcome {
    std::uint64_t seed;
    double max_abs_h, hard_start, hard_end;
    int iterations;
    std::string selected;
  };
  std::vector<Outcome> out(jobs.size());
  parallel_for(jobs.size(), threads, [&](std::size_t k) {
    const Job& job = jobs[k];
    const std::uint64_t seed = derived_seed(c.seed, {job.d, job.instance});
    const RandomStoquasticInstance inst = random_stoquastic_instance(job.d, seed);
    OptimizerConfig oc = c.optimizer;
    oc.seed = splitmix64(seed);
    const OptimizationResult res = optimize(inst.scrambled, oc);
    out[k] = {seed, max_abs(inst.scrambled.matrix()), res.trace.hard_start, res.trace.hard_end,
              res.trace.total_iterations, res.trace.selected};
  });

  ExperimentResult r;
  CsvTable rows({"d", "instance", "seed", "max_abs_h", "threshold", "hard_start", "hard_end", "success",
                 "iterations", "selected"});
  CsvTable summary({"d", "instances", "successes", "success_rate"});
  json rates = json::object();
  for (int d : c.benchmark.dims) {
    int ok = 0, total = 0;
    for (std::size_t k = 0; k < jobs.size(); ++k) {
      if (jobs[k].d != d) continue;
      const Outcome& o = out[k];
      const double threshold = c.benchmark.tolerance * o.max_abs_h;
      const bool success = o.hard_end <= threshold;
      ok += success;
      ++total;
      rows.add_row({std::int64_t{d}, std::int64_t{jobs[k].instance}, std::to_string(o.seed), o.max_abs_h, threshold,
                    o.hard_start, o.hard_end, std::int64_t{success}, std::int64_t{o.iterations}, o.selected});
    }
    const double rate = static_cast<double>(ok) / total;
    summary.add_row({std::int64_t{d}, std::int64_t{total}, std::int64_t{ok}, rate});
    rates[std::to_string(d)] = rate;
  }
  r.tables.push_back({"benchmark_random.csv", std::move(rows)});
  r.tables.push_back({"benchmark_summary.csv", std::move(summary)});
  r.summary["success_rate"] = rates;
  return r;
}

// ---- sign study ------------------------------------------------------------

ExperimentResult run_sign_study(const ExperimentConfig& c, int threads) {
  const SignStudyConfig& s = c.sign_study;
  std::vector<double> grid(s.alpha_steps);
  for (int k = 0; k < s.alpha_steps; ++k) {
    grid[k] = s.alpha_min + (s.alpha_max - s.alpha_min) * k / static_cast<double>(s.alpha_steps - 1);
  }

  // Chains whose positive off-diagonal entries cancel completely have no
  // alpha family; they are skipped and counted.
  std::vector<std::uint64_t> seeds;
  std::vector<DenseOperator> chains;
  int skipped = 0;
  for (std::int64_t attempt = 0; static_cast<int>(seeds.size()) < s.instances; ++attempt) {
    if (attempt > 100LL * s.instances) throw NumericalError("sign_study: could not draw non-stoquastic instances");
    const std::uint64_t seed = derived_seed(c.seed, {attempt});
    DenseOperator h = build_chain({s.n_sites, random_gaussian_term(2, seed)});
    if (!(nonstoq_part(h).matrix().sum() > 0.0)) {
      ++skipped;
      continue;
    }
    seeds.push_back(seed);
    chains.push_back(std::move(h));
  }

  std::vector<std::vector<SignStudyRow>> rows(chains.size());
  parallel_for(chains.size(), threads, [&](std::size_t k) { rows[k] = sign_vs_nonstoq_study(chains[k], grid, c.qmc); });

  ExperimentResult r;
  CsvTable table({"instance", "seed", "alpha", "nu1", "d_nu1", "inverse_sign", "log_inverse_sign"});
  CsvTable summary({"instance", "seed", "spearman", "monotone"});
  int monotone = 0;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    std::vector<double> x, y;
    const double dim = static_cast<double>(chains[k].dim());
    for (const auto& row : rows[k]) {
      x.push_back(row.nu1);
      y.push_back(std::log(row.inverse_sign));
      table.add_row({static_cast<std::int64_t>(k), std::to_string(seeds[k]), row.alpha, row.nu1, dim * row.nu1,
                     row.inverse_sign, y.back()});
    }
    const double rho = spearman_correlation(x, y);
    const bool ok = rho >= 0.9;
    monotone += ok;
    summary.add_row({static_cast<std::int64_t>(k), std::to_string(seeds[k]), rho, std::int64_t{ok}});
  }
  r.tables.push_back({"sign_study.csv", std::move(table)});
  r.tables.push_back({"sign_study_summary.csv", std::move(summary)});
  r.summary["instances"] = chains.size();
  r.summary["skipped_stoquastic"] = skipped;
  r.summary["fraction_rho_ge_0.9"] = static_cast<double>(monotone) / static_cast<double>(chains.size());
  return r;
}

// ---- maxcut ----------------------------------------------------------------

MaxCutInstance single_graph(const MaxCutConfig& m) {
  if (!m.graph_path.empty()) {
    std::ifstream in(m.graph_path);
    if (!in) throw InvalidArgument("cannot open graph file '" + m.graph_path + "'");
    return read_edge_list(in, m.n_vertices);
  }
  int n = m.n_vertices.value_or(0);
  if (!m.n_vertices) {
    for (auto [i, j] : m.edges) n = std::max({n, i + 1, j + 1});
  }
  return MaxCutInstance(n, m.edges);
}

ExperimentResult run_maxcut_verify(const ExperimentConfig& c, int threads) {
  std::vector<MaxCutInstance> graphs;
  if (c.maxcut.all_connected_upto > 0) {
    for (int n = 2; n <= c.maxcut.all_connected_upto; ++n) {
      for (auto& g : connected_graphs(n)) graphs.push_back(std::move(g));
    }
  } else {
    graphs.push_back(single_graph(c.maxcut));
  }
  OrbitOptions o;
  o.qubit_cap = c.maxcut.qubit_cap;
  o.threads = threads;

  ExperimentResult r;
  CsvTable table({"graph", "n_vertices", "n_edges", "edges", "penalty", "ising_min", "expected_nu1", "zflip_min",
                  "energy_identity", "cut_checked", "cut_correspondence", "orbit_checked", "orbit_min",
                  "orbit_matches", "passed"});
  int passed = 0;
  for (std::size_t k = 0; k < graphs.size(); ++k) {
    const ReductionReport rep = verify_reduction(graphs[k], o);
    passed += rep.passed();
    if (!rep.passed()) r.diagnostics.push_back("reduction check failed for graph " + edges_label(graphs[k]));
    table.add_row({static_cast<std::int64_t>(k), std::int64_t{rep.n_vertices}, std::int64_t{rep.n_edges},
                   edges_label(graphs[k]), rep.penalty, std::int64_t{rep.ising_min},
                   0.5 * (rep.ising_min + rep.n_edges), rep.zflip_min, std::int64_t{rep.energy_identity},
                   std::int64_t{rep.cut_checked}, std::int64_t{rep.cut_correspondence},
                   std::int64_t{rep.orbit_checked}, rep.orbit_checked ? rep.orbit_min : kInf,
                   std::int64_t{rep.orbit_matches}, std::int64_t{rep.passed()}});
  }
  r.numerical_failure = passed != static_cast<int>(graphs.size());
  r.tables.push_back({"verify_reduction.csv", std::move(table)});
  r.summary["graphs"] = graphs.size();
  r.summary["passed"] = passed;
  return r;
}

ExperimentResult run_maxcut_embed(const ExperimentConfig& c) {
  const MaxCutInstance g = single_graph(c.maxcut);
  const EmbeddedInstance inst = embed_maxcut(g, c.maxcut.penalty);
  ExperimentResult r;
  CsvTable terms({"kind", "i", "j", "weight"});
  for (const auto& [e, w] : inst.hamiltonian.xx()) terms.add_row({std::string("xx"), std::int64_t{e.first}, std::int64_t{e.second}, w});
  for (const auto& [e, w] : inst.hamiltonian.zz()) terms.add_row({std::string("zz"), std::int64_t{e.first}, std::int64_t{e.second}, w});
  r.tables.push_back({"embedded_terms.csv", std::move(terms)});
  const IsingGround ground = ising_ground_energy(g);
  r.summary["n_qubits"] = inst.n_qubits();
  r.summary["penalty"] = inst.penalty;
  r.summary["nu1_computational_basis"] = nu1_closed_form_2local(inst.hamiltonian);
  r.summary["ising_min"] = ground.energy;
  r.summary["zflip_nu1_at_ground_state"] = zflip_nu1(inst, ground.spins);
  return r;
}

// ---- single-model commands --------------------------------------------------

ExperimentResult run_measure(const ExperimentConfig& c) {
  const MeasureSpec& spec = c.measure;
  const bool dense_mode = spec.mode == MeasureMode::dense || spec.mode == MeasureMode::smooth;
  const ResolvedModel m = resolve_model(c.model, c.seed, dense_mode);
  double value = 0.0;
  switch (spec.mode) {
    case MeasureMode::dense:
      value = nu_p_dense(*m.dense, spec.p, spec.normalization);
      break;
    case MeasureMode::smooth:
      if (spec.p != 1.0) throw InvalidArgument("smooth measure is defined for p = 1 only");
      value = smooth_nu1_offdiagonal(*m.dense, *spec.alpha);
      break;
    case MeasureMode::effective_local:
      if (!m.term) throw InvalidArgument("effective_local needs a two-site term model");
      if (spec.p == 1.0) value = effective_local_nu1(*m.term);
      else if (spec.p == 2.0) value = std::sqrt(effective_local_nu2_squared(*m.term));
      else throw InvalidArgument("effective_local supports p = 1 and p = 2");
      break;
    case MeasureMode::closed_form_2local:
      if (!m.coefficients) throw InvalidArgument("closed_form_2local needs a coefficients model");
      value = spec.normalization == Normalization::per_dimension
                  ? nu_p_closed_form_2local(*m.coefficients, spec.p)
                  : std::pow(positive_part_lp_power(*m.coefficients, spec.p), 1.0 / spec.p);
      break;
  }
  ExperimentResult r;
  CsvTable t({"model", "mode", "p", "alpha", "normalization", "value"});
  t.add_row({m.label, config_to_json(c)["measure"]["mode"].get<std::string>(), spec.p,
             spec.alpha ? Cell(*spec.alpha) : Cell(std::string()),
             std::string(spec.normalization == Normalization::per_dimension ? "per_dimension" : "raw_sum"), value});
  r.tables.push_back({"measure.csv", std::move(t)});
  r.summary["value"] = value;
  return r;
}

ExperimentResult run_avgsign(const ExperimentConfig& c) {
  const ResolvedModel m = resolve_model(c.model, c.seed, true);
  const AverageSign s = average_sign(*m.dense, c.qmc);
  const double proxy = std::abs(s.value) <= kVanishingSign ? kInf : 1.0 / (s.value * s.value) - 1.0;
  ExperimentResult r;
  CsvTable t({"model", "dim", "beta", "m", "sign", "signed_trace", "absolute_trace", "diagonal_condition_ok",
              "variance_proxy"});
  t.add_row({m.label, static_cast<std::int64_t>(m.dense->dim()), c.qmc.beta, std::int64_t{c.qmc.m}, s.value,
             s.signed_trace, s.absolute_trace, std::int64_t{s.diagonal_condition_ok}, proxy});
  r.tables.push_back({"avgsign.csv", std::move(t)});
  r.summary["sign"] = s.value;
  return r;
}

ExperimentResult run_optimize(const ExperimentConfig& c) {
  const ResolvedModel m = resolve_model(c.model, c.seed, true);
  if (!m.term) throw InvalidArgument("optimize needs a two-site term model (ladder, random_stoquastic, term_file)");
  OptimizerConfig oc = c.optimizer;
  oc.seed = splitmix64(c.seed);
  const OptimizationResult res = optimize(*m.term, oc);
  const DenseOperator rotated = conjugate_onsite(*m.dense, res.point);
  const double nb = nu_p_dense(*m.dense, 1.0), na = nu_p_dense(rotated, 1.0);
  const double sb = average_sign(*m.dense, c.qmc).value, sa = average_sign(rotated, c.qmc).value;

  ExperimentResult r;
  CsvTable t({"model", "d", "hard_identity", "hard_start", "hard_end", "nu1_before", "nu1_after", "sign_before",
              "sign_after", "iterations", "selected"});
  t.add_row({m.label, std::int64_t{m.term->local_dim()}, res.trace.hard_identity, res.trace.hard_start,
             res.trace.hard_end, nb, na, sb, sa, std::int64_t{res.trace.total_iterations}, res.trace.selected});
  r.tables.push_back({"optimize.csv", std::move(t)});

  CsvTable trace({"branch", "iteration", "objective", "gradient_norm", "step", "status"});
  for (const auto& b : res.trace.branches) {
    for (std::size_t k = 0; k < b.iterations.size(); ++k) {
      const auto& it = b.iterations[k];
      trace.add_row({b.name, static_cast<std::int64_t>(k + 1), it.objective, it.gradient_norm, it.step,
                     k + 1 == b.iterations.size() ? b.status : std::string()});
    }
  }
  r.tables.push_back({"optimize_trace.csv", std::move(trace)});
  std::ostringstream basis;
  write_matrix_text(basis, res.point.matrix());
  r.extra.push_back({"basis.txt", basis.str()});
  r.summary["hard_end"] = res.trace.hard_end;
  r.summary["selected"] = res.trace.selected;
  return r;
}

}  // namespace

std::vector<MaxCutInstance> connected_graphs(int n) {
  if (n < 1 || n > 5) throw InvalidArgument("connected_graphs: n must lie in [1, 5]");
  std::vector<Edge> all;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) all.emplace_back(i, j);
  std::vector<int> perm(n);

  auto connected = [&](unsigned mask) {
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int v) {
      while (parent[v] != v) v = parent[v] = parent[parent[v]];
      return v;
    };
    for (std::size_t e = 0; e < all.size(); ++e)
      if (mask >> e & 1u) parent[find(all[e].first)] = find(all[e].second);
    for (int v = 1; v < n; ++v)
      if (find(v) != find(0)) return false;
    return true;
  };
  auto canonical = [&](unsigned mask) {
    std::iota(perm.begin(), perm.end(), 0);
    unsigned best = ~0u;
    do {
      unsigned image = 0;
      for (std::size_t e = 0; e < all.size(); ++e) {
        if (!(mask >> e & 1u)) continue;
        int a = perm[all[e].first], b = perm[all[e].second];
        if (a > b) std::swap(a, b);
        const auto it = std::find(all.begin(), all.end(), Edge{a, b});
        image |= 1u << (it - all.begin());
      }
      best = std::min(best, image);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
  };

  std::set<unsigned> seen;
  std::vector<MaxCutInstance> out;
  for (unsigned mask = 0; mask < (1u << all.size()); ++mask) {
    if (!connected(mask) || !seen.insert(canonical(mask)).second) continue;
    std::vector<Edge> edges;
    for (std::size_t e = 0; e < all.size(); ++e)
      if (mask >> e & 1u) edges.push_back(all[e]);
    out.emplace_back(n, std::move(edges));
  }
  return out;
}

ExperimentResult run_experiment(const ExperimentConfig& c, int threads) {
  c.validate();
  switch (c.experiment) {
    case ExperimentKind::jmodel_sweep:
    case ExperimentKind::ladder_sweep:
      return run_sweep(c, threads);
    case ExperimentKind::benchmark_random:
      return run_benchmark(c, threads);
    case ExperimentKind::sign_study:
      return run_sign_study(c, threads);
    case ExperimentKind::maxcut_verify:
      return run_maxcut_verify(c, threads);
    case ExperimentKind::maxcut_embed:
      return run_maxcut_embed(c);
    case ExperimentKind::measure:
      return run_measure(c);
    case ExperimentKind::avgsign:
      return run_avgsign(c);
    case ExperimentKind::optimize:
      return run_optimize(c);
  }
  throw InvalidArgument("unknown experiment");
}

int write_artifacts(const ExperimentConfig& c, const ExperimentResult& r, int threads, double wall_seconds) {
  namespace fs = std::filesystem;
  const fs::path dir = c.output_dir;
  fs::create_directories(dir);

  json config = config_to_json(c);
  config["threads"] = nullptr;  // thread count never changes results
  const std::uint64_t config_checksum = fnv1a64(config.dump() + "|" + kVersion);

  json outputs = json::array();
  for (const auto& t : r.tables) {
    const std::string text = t.table.str();
    outputs.push_back({{"file", t.file}, {"rows", t.table.rows().size()}, {"checksum", hex64(write_text_file(dir / t.file, text))}});
  }
  int gaps = 0;
  for (const auto& p : r.plots) {
    std::ostringstream text;
    write_plotdata(text, p);
    const std::string file = "plot_" + p.observable + ".txt";
    outputs.push_back({{"file", file}, {"gaps", p.gaps()}, {"checksum", hex64(write_text_file(dir / file, text.str()))}});
    gaps += p.gaps();
  }
  for (const auto& e : r.extra) {
    outputs.push_back({{"file", e.file}, {"checksum", hex64(write_text_file(dir / e.file, e.contents))}});
  }

  json manifest;
  manifest["tool"] = "stoqease";
  manifest["version"] = kVersion;
  manifest["experiment"] = to_string(c.experiment);
  manifest["seed"] = c.seed;
  manifest["threads"] = threads;
  manifest["config"] = config_to_json(c);
  manifest["config_checksum"] = hex64(config_checksum);
  manifest["outputs"] = outputs;
  manifest["summary"] = r.summary;
  manifest["diagnostics"] = r.diagnostics;
  manifest["wall_time_seconds"] = wall_seconds;

  // Compare with a manifest left by an earlier run in the same directory.
  const fs::path manifest_path = dir / "manifest.json";
  json rerun = nullptr;
  if (fs::exists(manifest_path)) {
    std::ifstream in(manifest_path);
    const json previous = json::parse(in, nullptr, false);
    if (!previous.is_discarded() && previous.contains("config_checksum")) {
      const bool same_config = previous["config_checksum"] == manifest["config_checksum"];
      bool same_outputs = previous.contains("outputs") && previous["outputs"].size() == outputs.size();
      if (same_outputs) {
        for (std::size_t k = 0; k < outputs.size(); ++k) {
          same_outputs = same_outputs && previous["outputs"][k].value("checksum", "") == outputs[k]["checksum"];
        }
      }
      rerun = {{"previous_config_checksum", previous["config_checksum"]},
               {"config_matches", same_config},
               {"outputs_match", same_outputs},
               {"mismatch", !same_config || !same_outputs}};
    }
  }
  manifest["rerun"] = rerun;
  write_text_file(manifest_path, manifest.dump(2) + "\n");

  if (r.numerical_failure || gaps > 0) return kExitNumerical;
  return kExitOk;
}

}  // namespace stoqease
