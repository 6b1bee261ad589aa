#include "stoqease/hamiltonian.hpp"

#include "stoqease/measures.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace stoqease {

namespace {

Eigen::Index checked_power(int base, int exponent, Eigen::Index limit, const char* what) {
  Eigen::Index out = 1;
  for (int k = 0; k < exponent; ++k) {
    out *= base;
    if (out > limit) {
      std::ostringstream os;
      os << what << ": dimension " << base << "^" << exponent << " exceeds dense limit " << limit;
      throw InvalidArgument(os.str());
    }
  }
  return out;
}

constexpr Eigen::Index kDenseDimLimit = Eigen::Index{1} << kDenseQubitLimit;

Matrix symmetrized(const Matrix& m) { return 0.5 * (m + m.transpose()); }

}  // namespace

char to_char(Pauli p) {
  switch (p) {
    case Pauli::I: return 'I';
    case Pauli::X: return 'X';
    case Pauli::Y: return 'Y';
    case Pauli::Z: return 'Z';
  }
  return '?';
}

Matrix pauli_matrix(Pauli p) {
  Matrix m = Matrix::Zero(2, 2);
  switch (p) {
    case Pauli::I: m << 1, 0, 0, 1; break;
    case Pauli::X: m << 0, 1, 1, 0; break;
    case Pauli::Z: m << 1, 0, 0, -1; break;
    case Pauli::Y: throw InvalidArgument("pauli_matrix: Y is not a real matrix");
  }
  return m;
}

DenseOperator pauli_string(std::span<const Pauli> labels) {
  const int n = static_cast<int>(labels.size());
  if (n < 1) throw InvalidArgument("pauli_string: empty label list");
  if (n > kDenseQubitLimit) throw InvalidArgument("pauli_string: exceeds dense qubit limit");
  const auto y_count = std::count(labels.begin(), labels.end(), Pauli::Y);
  if (y_count % 2 != 0) {
    throw InvalidArgument("pauli_string: odd number of Y factors gives an imaginary operator");
  }
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::Index flip = 0;
  for (int s = 0; s < n; ++s) {
    if (labels[s] == Pauli::X || labels[s] == Pauli::Y) flip |= Eigen::Index{1} << (n - 1 - s);
  }
  // Y|b> = i (-1)^b |1-b>; pairs of i combine to (-1)^(y_count/2).
  const double y_phase = (y_count / 2) % 2 == 0 ? 1.0 : -1.0;
  Matrix m = Matrix::Zero(dim, dim);
  for (Eigen::Index col = 0; col < dim; ++col) {
    double value = y_phase;
    for (int s = 0; s < n; ++s) {
      const bool bit = (col >> (n - 1 - s)) & 1;
      if ((labels[s] == Pauli::Z || labels[s] == Pauli::Y) && bit) value = -value;
    }
    m(col ^ flip, col) = value;
  }
  return DenseOperator::qubits(std::move(m));
}

DenseOperator pauli_embed(Pauli label, int site, int n) {
  if (n < 1 || site < 0 || site >= n) throw InvalidArgument("pauli_embed: site out of range");
  if (label == Pauli::Y) throw InvalidArgument("pauli_embed: Y alone is not a real operator");
  std::vector<Pauli> labels(n, Pauli::I);
  labels[site] = label;
  return pauli_string(labels);
}

DenseOperator pauli_pair(Pauli a, int i, Pauli b, int j, int n) {
  if (n < 2 || i < 0 || j < 0 || i >= n || j >= n || i == j) {
    throw InvalidArgument("pauli_pair: sites out of range or equal");
  }
  std::vector<Pauli> labels(n, Pauli::I);
  labels[i] = a;
  labels[j] = b;
  return pauli_string(labels);
}

TwoSiteTerm::TwoSiteTerm(int local_dim, Matrix h) : d_(local_dim), h_(std::move(h)) {
  if (d_ < 1) throw InvalidArgument("TwoSiteTerm: local dimension must be positive");
  if (h_.rows() != d_ * d_ || h_.cols() != d_ * d_) {
    throw InvalidArgument("TwoSiteTerm: matrix must be d^2 x d^2");
  }
  if (!h_.allFinite()) throw InvalidArgument("TwoSiteTerm: non-finite entry");
  if (!is_symmetric(h_)) throw InvalidArgument("TwoSiteTerm: matrix is not symmetric");
}

DenseOperator build_chain(const ChainSpec& spec) {
  const int n = spec.n_sites;
  if (n < 3) throw InvalidArgument("build_chain: closed chains need at least 3 sites");
  const int d = spec.term.local_dim();
  const Eigen::Index dim = checked_power(d, n, kDenseDimLimit, "build_chain");
  const Matrix& h = spec.term.matrix();

  std::vector<Eigen::Index> stride(n);
  stride[n - 1] = 1;
  for (int s = n - 2; s >= 0; --s) stride[s] = stride[s + 1] * d;

  Matrix out = Matrix::Zero(dim, dim);
  for (int p = 0; p < n; ++p) {
    const int q = (p + 1) % n;
    for (Eigen::Index col = 0; col < dim; ++col) {
      const int a = static_cast<int>((col / stride[p]) % d);
      const int b = static_cast<int>((col / stride[q]) % d);
      const Eigen::Index rest = col - a * stride[p] - b * stride[q];
      const int local_col = a * d + b;
      for (int a2 = 0; a2 < d; ++a2) {
        for (int b2 = 0; b2 < d; ++b2) {
          const double v = h(a2 * d + b2, local_col);
          if (v != 0.0) out(rest + a2 * stride[p] + b2 * stride[q], col) += v;
        }
      }
    }
  }
  return DenseOperator(std::move(out), std::vector<int>(n, d));
}

CoefficientGraph::CoefficientGraph(int n_qubits) : n_(n_qubits), x_(n_qubits, 0.0), z_(n_qubits, 0.0) {
  if (n_qubits < 1) throw InvalidArgument("CoefficientGraph: need at least one qubit");
}

void CoefficientGraph::check_site(int i) const {
  if (i < 0 || i >= n_) throw InvalidArgument("CoefficientGraph: site index out of range");
}

Edge CoefficientGraph::ordered(int i, int j) {
  if (i == j) throw InvalidArgument("CoefficientGraph: self-loops are not allowed");
  return i < j ? Edge{i, j} : Edge{j, i};
}

void CoefficientGraph::add_xx(int i, int j, double w) {
  check_site(i), check_site(j);
  xx_[ordered(i, j)] += w;
}
void CoefficientGraph::add_yy(int i, int j, double w) {
  check_site(i), check_site(j);
  yy_[ordered(i, j)] += w;
}
void CoefficientGraph::add_zz(int i, int j, double w) {
  check_site(i), check_site(j);
  zz_[ordered(i, j)] += w;
}
void CoefficientGraph::add_xz(int x_site, int z_site, double w) {
  check_site(x_site), check_site(z_site);
  if (x_site == z_site) throw InvalidArgument("CoefficientGraph: self-loops are not allowed");
  xz_[{x_site, z_site}] += w;
}
void CoefficientGraph::add_x(int i, double w) {
  check_site(i);
  x_[i] += w;
}
void CoefficientGraph::add_z(int i, double w) {
  check_site(i);
  z_[i] += w;
}

std::vector<Edge> CoefficientGraph::edges() const {
  std::vector<Edge> out;
  auto collect = [&out](const std::map<Edge, double>& m, bool reorder) {
    for (const auto& [e, w] : m) {
      if (w == 0.0) continue;
      out.push_back(reorder ? ordered(e.first, e.second) : e);
    }
  };
  collect(xx_, false);
  collect(yy_, false);
  collect(zz_, false);
  collect(xz_, true);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

int CoefficientGraph::xz_degree(int i) const { return static_cast<int>(xz_weights(i).size()); }

std::vector<double> CoefficientGraph::xz_weights(int i) const {
  check_site(i);
  std::vector<double> out;
  for (auto it = xz_.lower_bound({i, 0}); it != xz_.end() && it->first.first == i; ++it) {
    if (it->second != 0.0) out.push_back(it->second);
  }
  return out;
}

DenseOperator build_coefficient_hamiltonian(const CoefficientGraph& g, int dense_limit) {
  const int n = g.n_qubits();
  if (n > dense_limit || n > kDenseQubitLimit) {
    std::ostringstream os;
    os << "build_coefficient_hamiltonian: " << n << " qubits exceeds dense limit " << dense_limit;
    throw InvalidArgument(os.str());
  }
  const Eigen::Index dim = Eigen::Index{1} << n;
  auto bit = [n](Eigen::Index s, int site) { return static_cast<int>((s >> (n - 1 - site)) & 1); };
  auto mask = [n](int site) { return Eigen::Index{1} << (n - 1 - site); };
  auto parity_sign = [](int b) { return b ? -1.0 : 1.0; };

  Matrix out = Matrix::Zero(dim, dim);
  for (Eigen::Index col = 0; col < dim; ++col) {
    double diag = 0.0;
    for (const auto& [e, w] : g.zz()) diag += w * parity_sign(bit(col, e.first) ^ bit(col, e.second));
    for (int i = 0; i < n; ++i) diag += g.z_field()[i] * parity_sign(bit(col, i));
    out(col, col) += diag;

    for (const auto& [e, w] : g.xx()) out(col ^ mask(e.first) ^ mask(e.second), col) += w;
    // Y_i Y_j |b> = -(-1)^(b_i + b_j) |b ^ flips>
    for (const auto& [e, w] : g.yy()) {
      out(col ^ mask(e.first) ^ mask(e.second), col) -= w * parity_sign(bit(col, e.first) ^ bit(col, e.second));
    }
    for (const auto& [e, w] : g.xz()) out(col ^ mask(e.first), col) += w * parity_sign(bit(col, e.second));
    for (int i = 0; i < n; ++i) {
      if (g.x_field()[i] != 0.0) out(col ^ mask(i), col) += g.x_field()[i];
    }
  }
  return DenseOperator::qubits(std::move(out));
}

LadderParams LadderParams::jmodel(double j0, double j1, double j2, double j3, int n_rungs) {
  return {LadderModel::JModel, {j0, j1, j2, j3}, n_rungs};
}

LadderParams LadderParams::frustrated(double j_par, double j_perp, double j_cross, int n_rungs) {
  return {LadderModel::FrustratedLadder, {j_par, j_perp, j_cross, 0.0}, n_rungs};
}

Matrix heisenberg_pair() {
  Matrix m = pauli_pair(Pauli::X, 0, Pauli::X, 1, 2).matrix();
  m += pauli_pair(Pauli::Y, 0, Pauli::Y, 1, 2).matrix();
  m += pauli_pair(Pauli::Z, 0, Pauli::Z, 1, 2).matrix();
  return m;
}

ChainSpec build_ladder(const LadderParams& params) {
  for (double j : params.couplings) {
    if (!(j >= 0.0)) throw InvalidArgument("build_ladder: couplings must be non-negative");
  }
  // Qubits of the two-dimer window: 0 = leg 1 of rung i, 1 = leg 2 of rung i,
  // 2 = leg 1 of rung i+1, 3 = leg 2 of rung i+1.
  auto bond = [](int a, int b) {
    Matrix m = Matrix::Zero(16, 16);
    for (Pauli p : {Pauli::X, Pauli::Y, Pauli::Z}) m += pauli_pair(p, a, p, b, 4).matrix();
    return m;
  };
  const auto& j = params.couplings;
  Matrix h = Matrix::Zero(16, 16);
  switch (params.model) {
    case LadderModel::JModel:
      h = j[0] * bond(0, 2) + j[1] * bond(1, 3) + 0.5 * j[2] * (bond(0, 1) + bond(2, 3)) + j[3] * bond(2, 1);
      break;
    case LadderModel::FrustratedLadder:
      h = j[0] * (bond(0, 2) + bond(1, 3)) + 0.5 * j[1] * (bond(0, 1) + bond(2, 3)) +
          j[2] * (bond(0, 3) + bond(2, 1));
      break;
  }
  return ChainSpec{params.n_rungs, TwoSiteTerm(4, h)};
}

TwoSiteTerm conjugate_onsite(const TwoSiteTerm& term, const OrthogonalPoint& o) {
  if (o.dim() != term.local_dim()) throw InvalidArgument("conjugate_onsite: dimension mismatch");
  const Matrix c = kron(o.matrix(), o.matrix());
  return TwoSiteTerm(term.local_dim(), symmetrized(c * term.matrix() * c.transpose()));
}

DenseOperator conjugate_onsite(const DenseOperator& h, const OrthogonalPoint& o) {
  const int d = h.uniform_local_dim();
  if (d != o.dim()) throw InvalidArgument("conjugate_onsite: dimension mismatch");
  const Matrix c = kron_power(o.matrix(), h.n_sites());
  return DenseOperator(symmetrized(c * h.matrix() * c.transpose()), h.local_dims());
}

DenseOperator example_sign_free(int n) {
  if (n < 2 || n > kDenseQubitLimit) throw InvalidArgument("example_sign_free: need 2 <= n <= dense limit");
  CoefficientGraph g(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      g.add_xx(i, j, -0.5);
      g.add_yy(i, j, 0.5);
    }
    g.add_x(i, 1.0);
  }
  Matrix m = build_coefficient_hamiltonian(g).matrix();
  m += Matrix::Identity(m.rows(), m.cols());
  return DenseOperator::qubits(std::move(m));
}

DenseOperator example_fine_tuned(double a, double b, double beta, int m) {
  if (!(a > 0.0)) throw InvalidArgument("example_fine_tuned: a must be positive");
  if (!(b >= a)) throw InvalidArgument("example_fine_tuned: b must be >= a");
  if (!(beta > 0.0) || m < 1) throw InvalidArgument("example_fine_tuned: need beta > 0 and m >= 1");
  CoefficientGraph g(2);
  g.add_x(1, -1.0);
  g.add_xx(0, 1, -0.5);
  g.add_yy(0, 1, -0.5);
  g.add_xz(0, 1, 0.5 * (a + b));
  g.add_x(0, 0.5 * (b - a));
  Matrix h = build_coefficient_hamiltonian(g).matrix();
  h += Matrix::Identity(4, 4);
  h *= static_cast<double>(m) / beta;
  return DenseOperator::qubits(std::move(h));
}

RandomStoquasticInstance random_stoquastic_instance(int d, std::uint64_t seed) {
  if (d < 2) throw InvalidArgument("random_stoquastic_instance: d must be >= 2");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  const int dim = d * d;
  Vector spectrum(dim);
  for (int k = 0; k < dim; ++k) spectrum(k) = uniform(rng);
  const Matrix basis = haar_random_orthogonal(dim, rng);
  Matrix h = symmetrized(basis * spectrum.asDiagonal() * basis.transpose());
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      if (i != j && h(i, j) > 0.0) h(i, j) = 0.0;
  TwoSiteTerm base(d, h);
  OrthogonalPoint rotation(haar_random_orthogonal(d, rng));
  TwoSiteTerm scrambled = conjugate_onsite(base, rotation);
  return {std::move(scrambled), std::move(base), std::move(rotation)};
}

TwoSiteTerm random_gaussian_term(int d, std::uint64_t seed) {
  if (d < 1) throw InvalidArgument("random_gaussian_term: d must be >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(d * d, d * d);
  for (Eigen::Index j = 0; j < g.cols(); ++j)
    for (Eigen::Index i = 0; i < g.rows(); ++i) g(i, j) = normal(rng);
  return TwoSiteTerm(d, symmetrized(g));
}

DenseOperator alpha_family(const DenseOperator& h, double alpha) {
  if (!(alpha >= 0.0)) throw InvalidArgument("alpha_family: alpha must be non-negative");
  const Matrix plus = nonstoq_part(h).matrix();
  const double raw = plus.sum();  // D * nu1(H+)
  if (!(raw > 0.0)) throw InvalidArgument("alpha_family: input is stoquastic, nu1(H+) = 0");
  Matrix out = (h.matrix() + (alpha - 1.0) * plus) / raw;
  return DenseOperator(std::move(out), h.local_dims());
}

}  // namespace stoqease
