#pragma once

#include "stoqease/dense_operator.hpp"
#include "stoqease/orthogonal.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

namespace stoqease {

/// Largest number of qubits for which dense 2^n x 2^n matrices are built.
inline constexpr int kDenseQubitLimit = 14;

enum class Pauli { I, X, Y, Z };

char to_char(Pauli p);

/// Real 2x2 matrix of I, X or Z. Y is imaginary and rejected.
Matrix pauli_matrix(Pauli p);

/// A acting on `site` of an n-qubit register, identity elsewhere. Only real
/// labels (I, X, Z) are accepted; Y has to be paired, see pauli_string.
DenseOperator pauli_embed(Pauli label, int site, int n);

/// Tensor product of one label per site. Real whenever the number of Y
/// factors is even; an odd count is rejected.
DenseOperator pauli_string(std::span<const Pauli> labels);

/// Two-site product A_i B_j on n qubits (i != j).
DenseOperator pauli_pair(Pauli a, int i, Pauli b, int j, int n);

/// Real symmetric d^2 x d^2 nearest-neighbour term.
class TwoSiteTerm {
 public:
  TwoSiteTerm(int local_dim, Matrix h);

  int local_dim() const noexcept { return d_; }
  const Matrix& matrix() const noexcept { return h_; }

 private:
  int d_;
  Matrix h_;
};

/// Translation-invariant closed chain H = sum_i T_i(h), sites n-1 and 0 coupled.
struct ChainSpec {
  int n_sites;
  TwoSiteTerm term;
};

DenseOperator build_chain(const ChainSpec& spec);

using Edge = std::pair<int, int>;

/// Coefficients of a real (2+1)-local qubit Hamiltonian
///
///   sum_{i<j} (xx_ij X_i X_j + yy_ij Y_i Y_j + zz_ij Z_i Z_j)
///   + sum_{i != j} xz_ij X_i Z_j + sum_i (x_i X_i + z_i Z_i).
///
/// Pair maps are keyed with i < j; xz is keyed by the ordered pair (site
/// carrying X, site carrying Z). Adders accumulate.
class CoefficientGraph {
 public:
  explicit CoefficientGraph(int n_qubits);

  int n_qubits() const noexcept { return n_; }

  void add_xx(int i, int j, double w);
  void add_yy(int i, int j, double w);
  void add_zz(int i, int j, double w);
  void add_xz(int x_site, int z_site, double w);
  void add_x(int i, double w);
  void add_z(int i, double w);

  const std::map<Edge, double>& xx() const noexcept { return xx_; }
  const std::map<Edge, double>& yy() const noexcept { return yy_; }
  const std::map<Edge, double>& zz() const noexcept { return zz_; }
  const std::map<Edge, double>& xz() const noexcept { return xz_; }
  const std::vector<double>& x_field() const noexcept { return x_; }
  const std::vector<double>& z_field() const noexcept { return z_; }

  /// Unordered pairs with at least one nonzero two-body coefficient.
  std::vector<Edge> edges() const;
  /// |{j : xz(i, j) != 0}|.
  int xz_degree(int i) const;
  /// Nonzero xz weights with X on site i, ordered by partner site.
  std::vector<double> xz_weights(int i) const;

 private:
  void check_site(int i) const;
  static Edge ordered(int i, int j);

  int n_;
  std::map<Edge, double> xx_, yy_, zz_, xz_;
  std::vector<double> x_, z_;
};

DenseOperator build_coefficient_hamiltonian(const CoefficientGraph& g,
                                            int dense_limit = kDenseQubitLimit);

enum class LadderModel { JModel, FrustratedLadder };

/// Couplings of a two-leg spin-1/2 ladder. For JModel the couplings are
/// (J0, J1, J2, J3); for FrustratedLadder (J_par, J_perp, J_cross, unused).
struct LadderParams {
  LadderModel model;
  std::array<double, 4> couplings;
  int n_rungs;

  static LadderParams jmodel(double j0, double j1, double j2, double j3, int n_rungs);
  static LadderParams frustrated(double j_par, double j_perp, double j_cross, int n_rungs);
};

/// Heisenberg coupling S.S = XX + YY + ZZ (Pauli normalisation) of two qubits.
Matrix heisenberg_pair();

/// Dimer chain (d = 4, one rung per site, leg 1 = more significant qubit).
/// Rung couplings are split evenly between the two bonds touching a rung.
ChainSpec build_ladder(const LadderParams& params);

/// (O (x) O) h (O^T (x) O^T).
TwoSiteTerm conjugate_onsite(const TwoSiteTerm& term, const OrthogonalPoint& o);
/// O^{(x) n} H (O^T)^{(x) n}; all local dimensions must equal dim(O).
DenseOperator conjugate_onsite(const DenseOperator& h, const OrthogonalPoint& o);

/// 1 + sum_{i<j} -(X_i X_j - Y_i Y_j)/2 + sum_i X_i on n qubits.
DenseOperator example_sign_free(int n);

/// Two-qubit Hamiltonian whose transfer matrix at (beta, m) is
/// [[0,1,-b,0],[1,0,1,a],[-b,1,0,1],[0,a,1,0]].
DenseOperator example_fine_tuned(double a, double b, double beta, int m);

struct RandomStoquasticInstance {
  TwoSiteTerm scrambled;    ///< (O (x) O) base (O^T (x) O^T)
  TwoSiteTerm base;         ///< stoquastic term
  OrthogonalPoint rotation; ///< the scrambling O
};

/// Random term with i.i.d. uniform [-1, 1] spectrum in a Haar basis of
/// O(d^2), stripped of its positive off-diagonal part and scrambled by a
/// Haar on-site rotation. Pure function of (d, seed).
RandomStoquasticInstance random_stoquastic_instance(int d, std::uint64_t seed);

/// Symmetrised i.i.d. standard Gaussian d^2 x d^2 term, (G + G^T)/2.
TwoSiteTerm random_gaussian_term(int d, std::uint64_t seed);

/// (H - H+ + alpha H+) / (D nu1(H+)), whose nu1 equals alpha / D.
DenseOperator alpha_family(const DenseOperator& h, double alpha);

}  // namespace stoqease
