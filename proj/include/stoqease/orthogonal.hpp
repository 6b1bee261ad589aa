#pragma once

#include "stoqease/dense_operator.hpp"

#include <cstdint>
#include <random>

namespace stoqease {

/// ||O^T O - I||_max.
double orthogonality_defect(const Matrix& o);

/// A d x d real orthogonal matrix, checked to ||O^T O - I||_max <= 1e-8.
class OrthogonalPoint {
 public:
  static constexpr double kTolerance = 1e-8;

  explicit OrthogonalPoint(Matrix o);
  static OrthogonalPoint identity(int d);

  const Matrix& matrix() const noexcept { return o_; }
  int dim() const noexcept { return static_cast<int>(o_.rows()); }
  OrthogonalPoint transpose() const { return OrthogonalPoint(o_.transpose()); }

 private:
  Matrix o_;
};

/// Haar-distributed element of O(d): QR of a standard Gaussian matrix with
/// the signs of diag(R) folded into Q.
OrthogonalPoint haar_random_orthogonal(int d, std::uint64_t seed);
Matrix haar_random_orthogonal(int d, std::mt19937_64& rng);

/// exp(A) for skew-symmetric A; the result is orthogonal to rounding.
Matrix expm_skew(const Matrix& a);

/// Nearest orthogonal matrix in the Q factor sense: Q of a QR factorisation
/// with diag(R) > 0, so a nearly orthogonal input is barely moved.
Matrix reorthonormalize(const Matrix& o);

/// Kronecker product a (x) b with a acting on the more significant index.
Matrix kron(const Matrix& a, const Matrix& b);

/// o (x) o (x) ... (x) o, n factors.
Matrix kron_power(const Matrix& o, int n);

}  // namespace stoqease
