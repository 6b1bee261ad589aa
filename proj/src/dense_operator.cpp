#include "stoqease/dense_operator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace stoqease {

double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double symmetry_defect(const Matrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  return m.size() == 0 ? 0.0 : (m - m.transpose()).cwiseAbs().maxCoeff();
}

bool is_symmetric(const Matrix& m, double tol) {
  return symmetry_defect(m) <= tol * std::max(1.0, max_abs(m));
}

DenseOperator::DenseOperator(Matrix entries, std::vector<int> local_dims)
    : entries_(std::move(entries)), local_dims_(std::move(local_dims)) {
  if (entries_.rows() != entries_.cols() || entries_.rows() == 0) {
    throw InvalidArgument("DenseOperator: matrix must be square and non-empty");
  }
  Eigen::Index product = 1;
  for (int d : local_dims_) {
    if (d < 1) throw InvalidArgument("DenseOperator: local dimensions must be positive");
    product *= d;
  }
  if (local_dims_.empty() || product != entries_.rows()) {
    std::ostringstream os;
    os << "DenseOperator: product of local dimensions (" << product
       << ") does not match matrix size " << entries_.rows();
    throw InvalidArgument(os.str());
  }
  if (!entries_.allFinite()) throw InvalidArgument("DenseOperator: non-finite entry");
  if (!is_symmetric(entries_)) {
    std::ostringstream os;
    os << "DenseOperator: matrix is not symmetric (defect " << symmetry_defect(entries_) << ")";
    throw InvalidArgument(os.str());
  }
}

DenseOperator DenseOperator::qubits(Matrix entries) {
  const Eigen::Index dim = entries.rows();
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  if ((Eigen::Index{1} << n) != dim || n == 0) {
    throw InvalidArgument("DenseOperator::qubits: matrix size is not a power of two");
  }
  return DenseOperator(std::move(entries), std::vector<int>(n, 2));
}

int DenseOperator::uniform_local_dim() const noexcept {
  const int d = local_dims_.front();
  return std::all_of(local_dims_.begin(), local_dims_.end(), [d](int x) { return x == d; }) ? d : 0;
}

}  // namespace stoqease
