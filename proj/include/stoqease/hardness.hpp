#pragma once

#include "stoqease/hamiltonian.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

namespace stoqease {

/// Simple undirected graph. Edges are stored with i < j, sorted.
class MaxCutInstance {
 public:
  MaxCutInstance(int n_vertices, std::vector<Edge> edges);

  int n_vertices() const noexcept { return n_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  int n_edges() const noexcept { return static_cast<int>(edges_.size()); }
  int degree(int v) const;
  /// Maximum vertex degree.
  int max_degree() const;

 private:
  int n_;
  std::vector<Edge> edges_;
};

/// Reads "i j" pairs, one per line. Blank lines and '#' comments are
/// skipped. The vertex count is max index + 1 unless given.
MaxCutInstance read_edge_list(std::istream& in, std::optional<int> n_vertices = std::nullopt);

/// H' = sum_{(i,j) in E} [X_i X_j + C (Z_i Z_j - Z_i Z_xi - Z_xi Z_j)] on
/// v + e qubits. Qubits 0..v-1 are the graph vertices; qubit v + k is the
/// ancilla of edge k.
struct EmbeddedInstance {
  MaxCutInstance base;
  double penalty;
  std::vector<int> ancilla;  ///< ancilla qubit per edge
  CoefficientGraph hamiltonian;

  int n_qubits() const noexcept { return hamiltonian.n_qubits(); }
};

/// Default penalty C = 4 deg(G).
EmbeddedInstance embed_maxcut(const MaxCutInstance& g, std::optional<double> penalty = std::nullopt);

/// Penalty C = 2^{deg(G')} = 4^{deg(G)} for the nu_p variant.
double lp_variant_penalty(const MaxCutInstance& g);

/// sum_{(i,j)} (-1)^{s_i + s_j}.
int ising_energy(const MaxCutInstance& g, const std::vector<int>& spins);

struct IsingGround {
  int energy;
  std::vector<int> spins;
};

inline constexpr int kIsingVertexCap = 24;

/// Exact minimum by enumeration; ties go to the lexicographically smallest
/// spin vector.
IsingGround ising_ground_energy(const MaxCutInstance& g);

/// Number of edges whose endpoints carry equal spins.
int monochromatic_edges(const MaxCutInstance& g, const std::vector<int>& spins);

/// One on-site real Clifford, +-W^w X^x Z^z with the global sign dropped.
struct CliffordCode {
  bool w = false, x = false, z = false;

  int index() const noexcept { return (w ? 4 : 0) | (x ? 2 : 0) | (z ? 1 : 0); }
  static CliffordCode from_index(int k);
  bool operator==(const CliffordCode&) const = default;
};

using CliffordAssignment = std::vector<CliffordCode>;

/// C P C^T per qubit with C = W^w X^x Z^z, evaluated on the coefficients.
/// Only X and Z Pauli content is supported (any YY term is rejected).
CoefficientGraph clifford_conjugate(const CoefficientGraph& g, const CliffordAssignment& c);

/// Z flips s on the graph vertices, identity on the ancillas.
CliffordAssignment zflip_assignment(const EmbeddedInstance& inst, const std::vector<int>& spins);

/// nu1 of H' after the Z flips s, via the closed form.
double zflip_nu1(const EmbeddedInstance& inst, const std::vector<int>& spins);

/// D^{-1} ||H+||_p^p of H' after the Z flips s (nu1 for p = 1).
double zflip_lp_power(const EmbeddedInstance& inst, const std::vector<int>& spins, double p);

struct OrbitMinimum {
  double value;
  CliffordAssignment argmin;
  std::uint64_t evaluated;
};

struct OrbitOptions {
  int qubit_cap = 8;
  double p = 1.0;   ///< objective D^{-1} ||H+||_p^p
  int threads = 1;
};

/// Exact minimum over all 8^{v+e} on-site Clifford assignments. Ties go to
/// the lexicographically smallest assignment (qubit 0 most significant).
OrbitMinimum clifford_orbit_min(const EmbeddedInstance& inst, const OrbitOptions& options = {});

struct ReductionReport {
  int n_vertices = 0;
  int n_edges = 0;
  double penalty = 0.0;
  int ising_min = 0;
  std::vector<int> ground_spins;
  double zflip_min = 0.0;
  bool energy_identity = false;  ///< (a) zflip min = (lambda_min + e) / 2
  bool orbit_checked = false;
  double orbit_min = 0.0;
  bool orbit_matches = false;    ///< (b) Clifford min = zflip min
  bool cut_checked = false;
  bool cut_correspondence = false;  ///< (c) zflip nu1(s) = monochromatic(s) for every s

  bool passed() const noexcept {
    return energy_identity && (!cut_checked || cut_correspondence) && (!orbit_checked || orbit_matches);
  }
};

inline constexpr int kCutScanVertexCap = 16;

/// Checks (a) and (c) by scanning all 2^v flips when v <= kCutScanVertexCap
/// (above that, (a) is evaluated at the Ising ground state only), and (b)
/// when v + e fits the orbit cap. Skipped parts are flagged in the report.
ReductionReport verify_reduction(const MaxCutInstance& g, const OrbitOptions& options = {});

}  // namespace stoqease
