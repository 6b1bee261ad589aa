#include "stoqease/hardness.hpp"

#include "stoqease/measures.hpp"
#include "stoqease/parallel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <limits>
#include <set>
#include <sstream>
#include <string>

namespace stoqease {

MaxCutInstance::MaxCutInstance(int n_vertices, std::vector<Edge> edges) : n_(n_vertices) {
  if (n_vertices < 1) throw InvalidArgument("MaxCutInstance: need at least one vertex");
  std::set<Edge> seen;
  for (auto [i, j] : edges) {
    if (i < 0 || j < 0 || i >= n_ || j >= n_) {
      throw InvalidArgument("MaxCutInstance: edge (" + std::to_string(i) + ", " + std::to_string(j) +
                            ") out of range");
    }
    if (i == j) throw InvalidArgument("MaxCutInstance: self-loop at vertex " + std::to_string(i));
    if (!seen.insert({std::min(i, j), std::max(i, j)}).second) {
      throw InvalidArgument("MaxCutInstance: duplicate edge (" + std::to_string(i) + ", " + std::to_string(j) + ")");
    }
  }
  edges_.assign(seen.begin(), seen.end());
}

int MaxCutInstance::degree(int v) const {
  if (v < 0 || v >= n_) throw InvalidArgument("MaxCutInstance::degree: vertex out of range");
  return static_cast<int>(std::count_if(edges_.begin(), edges_.end(),
                                        [v](const Edge& e) { return e.first == v || e.second == v; }));
}

int MaxCutInstance::max_degree() const {
  int best = 0;
  for (int v = 0; v < n_; ++v) best = std::max(best, degree(v));
  return best;
}

MaxCutInstance read_edge_list(std::istream& in, std::optional<int> n_vertices) {
  std::vector<Edge> edges;
  std::string line;
  int line_no = 0;
  int max_index = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream row(line);
    long long i = 0, j = 0;
    if (!(row >> i)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      throw InvalidArgument("edge list line " + std::to_string(line_no) + ": expected two vertex indices");
    }
    std::string rest;
    if (!(row >> j) || (row >> rest)) {
      throw InvalidArgument("edge list line " + std::to_string(line_no) + ": expected exactly two vertex indices");
    }
    if (i < 0 || j < 0 || i > 1'000'000 || j > 1'000'000) {
      throw InvalidArgument("edge list line " + std::to_string(line_no) + ": vertex index out of range");
    }
    edges.emplace_back(static_cast<int>(i), static_cast<int>(j));
    max_index = std::max({max_index, static_cast<int>(i), static_cast<int>(j)});
  }
  const int n = n_vertices.value_or(max_index + 1);
  return MaxCutInstance(n, std::move(edges));
}

EmbeddedInstance embed_maxcut(const MaxCutInstance& g, std::optional<double> penalty) {
  if (g.n_edges() == 0) throw InvalidArgument("embed_maxcut: graph has no edges");
  const double c = penalty.value_or(4.0 * g.max_degree());
  if (!std::isfinite(c) || c < 0.0) throw InvalidArgument("embed_maxcut: penalty must be finite and >= 0");

  const int v = g.n_vertices();
  CoefficientGraph h(v + g.n_edges());
  std::vector<int> ancilla;
  for (int k = 0; k < g.n_edges(); ++k) {
    const auto [i, j] = g.edges()[k];
    const int xi = v + k;
    ancilla.push_back(xi);
    h.add_xx(i, j, 1.0);
    h.add_zz(i, j, c);
    h.add_zz(i, xi, -c);
    h.add_zz(j, xi, -c);
  }
  return {g, c, std::move(ancilla), std::move(h)};
}

double lp_variant_penalty(const MaxCutInstance& g) {
  return std::ldexp(1.0, 2 * g.max_degree());
}

namespace {

void check_spins(const MaxCutInstance& g, const std::vector<int>& spins) {
  if (static_cast<int>(spins.size()) != g.n_vertices()) {
    throw InvalidArgument("spin vector length " + std::to_string(spins.size()) + " does not match " +
                          std::to_string(g.n_vertices()) + " vertices");
  }
  for (int s : spins) {
    if (s != 0 && s != 1) throw InvalidArgument("spins must be 0 or 1");
  }
}

std::vector<int> spins_from_code(std::uint64_t code, int n) {
  std::vector<int> s(n);
  for (int i = 0; i < n; ++i) s[i] = static_cast<int>((code >> (n - 1 - i)) & 1u);
  return s;
}

}  // namespace

int ising_energy(const MaxCutInstance& g, const std::vector<int>& spins) {
  check_spins(g, spins);
  int e = 0;
  for (auto [i, j] : g.edges()) e += spins[i] == spins[j] ? 1 : -1;
  return e;
}

int monochromatic_edges(const MaxCutInstance& g, const std::vector<int>& spins) {
  check_spins(g, spins);
  int count = 0;
  for (auto [i, j] : g.edges()) count += spins[i] == spins[j];
  return count;
}

IsingGround ising_ground_energy(const MaxCutInstance& g) {
  const int n = g.n_vertices();
  if (n > kIsingVertexCap) {
    throw InvalidArgument("ising_ground_energy: " + std::to_string(n) + " vertices exceed the cap of " +
                          std::to_string(kIsingVertexCap));
  }
  // Codes run in lexicographic order of the spin vector, so a strict
  // improvement rule keeps the smallest minimiser.
  int best = std::numeric_limits<int>::max();
  std::uint64_t best_code = 0;
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << n); ++code) {
    int e = 0;
    for (auto [i, j] : g.edges()) {
      const bool si = (code >> (n - 1 - i)) & 1u;
      const bool sj = (code >> (n - 1 - j)) & 1u;
      e += si == sj ? 1 : -1;
    }
    if (e < best) {
      best = e;
      best_code = code;
    }
  }
  return {best, spins_from_code(best_code, n)};
}

CliffordCode CliffordCode::from_index(int k) {
  if (k < 0 || k > 7) throw InvalidArgument("CliffordCode: index must lie in [0, 8)");
  return {(k & 4) != 0, (k & 2) != 0, (k & 1) != 0};
}

namespace {

struct Mapped {
  Pauli p;
  double sign;
};

// Z^z acts first, then X^x, then W^w.
Mapped conjugate_pauli(Pauli p, CliffordCode c) {
  if (p == Pauli::X) return {c.w ? Pauli::Z : Pauli::X, c.z ? -1.0 : 1.0};
  if (p == Pauli::Z) return {c.w ? Pauli::X : Pauli::Z, c.x ? -1.0 : 1.0};
  throw InvalidArgument("clifford conjugation supports X and Z content only");
}

struct Term {
  int i, j;  // j < 0 for a single-site term
  Pauli a, b;
  double c;
};

std::vector<Term> term_list(const CoefficientGraph& g) {
  for (const auto& [e, w] : g.yy()) {
    if (w != 0.0) throw InvalidArgument("clifford conjugation does not support YY terms");
  }
  std::vector<Term> terms;
  for (const auto& [e, w] : g.xx()) terms.push_back({e.first, e.second, Pauli::X, Pauli::X, w});
  for (const auto& [e, w] : g.zz()) terms.push_back({e.first, e.second, Pauli::Z, Pauli::Z, w});
  for (const auto& [e, w] : g.xz()) terms.push_back({e.first, e.second, Pauli::X, Pauli::Z, w});
  for (int i = 0; i < g.n_qubits(); ++i) {
    if (g.x_field()[i] != 0.0) terms.push_back({i, -1, Pauli::X, Pauli::I, g.x_field()[i]});
    if (g.z_field()[i] != 0.0) terms.push_back({i, -1, Pauli::Z, Pauli::I, g.z_field()[i]});
  }
  return terms;
}

void check_assignment(const CoefficientGraph& g, const CliffordAssignment& c) {
  if (static_cast<int>(c.size()) != g.n_qubits()) {
    throw InvalidArgument("Clifford assignment length does not match the qubit count");
  }
}

}  // namespace

CoefficientGraph clifford_conjugate(const CoefficientGraph& g, const CliffordAssignment& c) {
  check_assignment(g, c);
  CoefficientGraph out(g.n_qubits());
  for (const Term& t : term_list(g)) {
    const Mapped a = conjugate_pauli(t.a, c[t.i]);
    if (t.j < 0) {
      if (a.p == Pauli::X) out.add_x(t.i, a.sign * t.c);
      else out.add_z(t.i, a.sign * t.c);
      continue;
    }
    const Mapped b = conjugate_pauli(t.b, c[t.j]);
    const double w = a.sign * b.sign * t.c;
    if (a.p == Pauli::X && b.p == Pauli::X) out.add_xx(t.i, t.j, w);
    else if (a.p == Pauli::Z && b.p == Pauli::Z) out.add_zz(t.i, t.j, w);
    else if (a.p == Pauli::X) out.add_xz(t.i, t.j, w);
    else out.add_xz(t.j, t.i, w);
  }
  return out;
}

CliffordAssignment zflip_assignment(const EmbeddedInstance& inst, const std::vector<int>& spins) {
  check_spins(inst.base, spins);
  CliffordAssignment c(inst.n_qubits());
  for (int i = 0; i < inst.base.n_vertices(); ++i) c[i].z = spins[i] == 1;
  return c;
}

double zflip_nu1(const EmbeddedInstance& inst, const std::vector<int>& spins) {
  return nu1_closed_form_2local(clifford_conjugate(inst.hamiltonian, zflip_assignment(inst, spins)));
}

double zflip_lp_power(const EmbeddedInstance& inst, const std::vector<int>& spins, double p) {
  const CoefficientGraph g = clifford_conjugate(inst.hamiltonian, zflip_assignment(inst, spins));
  return std::ldexp(positive_part_lp_power(g, p), -g.n_qubits());
}

namespace {

constexpr int kMaxOrbitQubits = 10;

// Evaluates D^{-1} ||H+||_p^p of the conjugated term list without building
// a CoefficientGraph.
class OrbitEvaluator {
 public:
  OrbitEvaluator(const CoefficientGraph& g, double p) : q_(g.n_qubits()), p_(p), terms_(term_list(g)) {}

  double operator()(const std::array<CliffordCode, kMaxOrbitQubits>& c) const {
    std::array<std::array<double, kMaxOrbitQubits>, kMaxOrbitQubits> xx{}, xz{};
    std::array<double, kMaxOrbitQubits> xf{};
    for (const Term& t : terms_) {
      const Mapped a = conjugate_pauli(t.a, c[t.i]);
      if (t.j < 0) {
        if (a.p == Pauli::X) xf[t.i] += a.sign * t.c;
        continue;
      }
      const Mapped b = conjugate_pauli(t.b, c[t.j]);
      const double w = a.sign * b.sign * t.c;
      if (a.p == Pauli::X && b.p == Pauli::X) xx[std::min(t.i, t.j)][std::max(t.i, t.j)] += w;
      else if (a.p == Pauli::X && b.p == Pauli::Z) xz[t.i][t.j] += w;
      else if (a.p == Pauli::Z && b.p == Pauli::X) xz[t.j][t.i] += w;
    }
    double total = 0.0;
    for (int i = 0; i < q_; ++i)
      for (int j = i + 1; j < q_; ++j) total += power(std::max(xx[i][j], 0.0));
    for (int i = 0; i < q_; ++i) {
      std::array<double, kMaxOrbitQubits> w{};
      int k = 0;
      for (int j = 0; j < q_; ++j)
        if (xz[i][j] != 0.0) w[k++] = xz[i][j];
      double sum = 0.0;
      for (unsigned pattern = 0; pattern < (1u << k); ++pattern) {
        double v = xf[i];
        for (int b = 0; b < k; ++b) v += (pattern >> b) & 1u ? -w[b] : w[b];
        sum += power(std::max(v, 0.0));
      }
      total += std::ldexp(sum, -k);
    }
    return total;
  }

 private:
  double power(double v) const { return p_ == 1.0 ? v : std::pow(v, p_); }

  int q_;
  double p_;
  std::vector<Term> terms_;
};

}  // namespace

OrbitMinimum clifford_orbit_min(const EmbeddedInstance& inst, const OrbitOptions& options) {
  const int q = inst.n_qubits();
  if (options.qubit_cap > kMaxOrbitQubits) {
    throw InvalidArgument("clifford_orbit_min: qubit_cap above " + std::to_string(kMaxOrbitQubits));
  }
  if (q > options.qubit_cap) {
    throw InvalidArgument("clifford_orbit_min: " + std::to_string(q) + " qubits exceed the cap of " +
                          std::to_string(options.qubit_cap));
  }
  if (!(options.p >= 1.0)) throw InvalidArgument("clifford_orbit_min: p must be >= 1");

  const OrbitEvaluator evaluate(inst.hamiltonian, options.p);
  const std::uint64_t total = std::uint64_t{1} << (3 * q);
  const std::uint64_t chunks = std::min<std::uint64_t>(total, 256);

  struct Best {
    double value = std::numeric_limits<double>::infinity();
    std::uint64_t index = 0;
  };
  std::vector<Best> partial(chunks);

  parallel_for(chunks, options.threads, [&](std::size_t chunk) {
    const std::uint64_t lo = total * chunk / chunks;
    const std::uint64_t hi = total * (chunk + 1) / chunks;
    std::array<CliffordCode, kMaxOrbitQubits> codes{};
    Best best;
    for (std::uint64_t a = lo; a < hi; ++a) {
      for (int i = 0; i < q; ++i) codes[i] = CliffordCode::from_index(static_cast<int>((a >> (3 * (q - 1 - i))) & 7u));
      const double v = evaluate(codes);
      if (v < best.value) best = {v, a};
    }
    partial[chunk] = best;
  });

  Best best;
  for (const Best& b : partial) {
    if (b.value < best.value) best = b;
  }
  CliffordAssignment argmin(q);
  for (int i = 0; i < q; ++i) argmin[i] = CliffordCode::from_index(static_cast<int>((best.index >> (3 * (q - 1 - i))) & 7u));
  return {best.value, std::move(argmin), total};
}

ReductionReport verify_reduction(const MaxCutInstance& g, const OrbitOptions& options) {
  ReductionReport r;
  r.n_vertices = g.n_vertices();
  r.n_edges = g.n_edges();
  const EmbeddedInstance inst = embed_maxcut(g);
  r.penalty = inst.penalty;

  const IsingGround ground = ising_ground_energy(g);
  r.ising_min = ground.energy;
  r.ground_spins = ground.spins;
  const double expected = 0.5 * (ground.energy + g.n_edges());

  const int v = g.n_vertices();
  if (v <= kCutScanVertexCap) {
    r.cut_checked = true;
    r.cut_correspondence = true;
    r.zflip_min = std::numeric_limits<double>::infinity();
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << v); ++code) {
      const std::vector<int> s = spins_from_code(code, v);
      const double nu = zflip_nu1(inst, s);
      r.zflip_min = std::min(r.zflip_min, nu);
      const int mono = monochromatic_edges(g, s);
      if (nu != mono || 2 * mono != ising_energy(g, s) + g.n_edges()) r.cut_correspondence = false;
    }
  } else {
    r.zflip_min = zflip_nu1(inst, ground.spins);
  }
  r.energy_identity = r.zflip_min == expected;

  if (inst.n_qubits() <= options.qubit_cap) {
    OrbitOptions o = options;
    o.p = 1.0;
    r.orbit_checked = true;
    r.orbit_min = clifford_orbit_min(inst, o).value;
    r.orbit_matches = std::abs(r.orbit_min - r.zflip_min) <= 1e-12 * (1.0 + r.zflip_min);
  }
  return r;
}

}  // namespace stoqease
