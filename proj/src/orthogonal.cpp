#include "stoqease/orthogonal.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <sstream>

namespace stoqease {

double orthogonality_defect(const Matrix& o) {
  if (o.rows() != o.cols()) return std::numeric_limits<double>::infinity();
  return (o.transpose() * o - Matrix::Identity(o.rows(), o.cols())).cwiseAbs().maxCoeff();
}

OrthogonalPoint::OrthogonalPoint(Matrix o) : o_(std::move(o)) {
  if (o_.rows() == 0 || o_.rows() != o_.cols()) {
    throw InvalidArgument("OrthogonalPoint: matrix must be square and non-empty");
  }
  const double defect = orthogonality_defect(o_);
  if (!(defect <= kTolerance)) {
    std::ostringstream os;
    os << "OrthogonalPoint: ||O^T O - I||_max = " << defect << " exceeds " << kTolerance;
    throw InvalidArgument(os.str());
  }
}

OrthogonalPoint OrthogonalPoint::identity(int d) { return OrthogonalPoint(Matrix::Identity(d, d)); }

Matrix haar_random_orthogonal(int d, std::mt19937_64& rng) {
  if (d < 1) throw InvalidArgument("haar_random_orthogonal: d must be >= 1");
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(d, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) g(i, j) = normal(rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < d; ++j) {
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  }
  return q;
}

OrthogonalPoint haar_random_orthogonal(int d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return OrthogonalPoint(haar_random_orthogonal(d, rng));
}

Matrix expm_skew(const Matrix& a) {
  if (a.rows() != a.cols()) throw InvalidArgument("expm_skew: matrix must be square");
  if (max_abs(a + a.transpose()) > 1e-10 * std::max(1.0, max_abs(a))) {
    throw InvalidArgument("expm_skew: matrix is not skew-symmetric");
  }
  Matrix e = a.exp();
  return e;
}

Matrix reorthonormalize(const Matrix& o) {
  Eigen::HouseholderQR<Matrix> qr(o);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < o.cols(); ++j) {
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  }
  return q;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix kron_power(const Matrix& o, int n) {
  if (n < 1) throw InvalidArgument("kron_power: n must be >= 1");
  Matrix out = o;
  for (int k = 1; k < n; ++k) out = kron(out, o);
  return out;
}

}  // namespace stoqease
