#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace stoqease {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Thrown when an input violates a documented precondition.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when a computation cannot produce a meaningful number
/// (degenerate denominators, non-finite traces, ...).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double max_abs(const Matrix& m);
double symmetry_defect(const Matrix& m);

/// Relative tolerance used for every symmetry check in the library.
inline constexpr double kSymmetryTolerance = 1e-12;

/// True when |m(i,j) - m(j,i)| <= tol * max(1, max|m|) for all i, j.
bool is_symmetric(const Matrix& m, double tol = kSymmetryTolerance);

/// A real symmetric matrix written in a fixed product basis.
///
/// The basis is ordered with site 0 as the most significant digit, i.e. the
/// matrix of A (x) B acts as A on site 0 and as B on site 1. Instances are
/// immutable after construction.
class DenseOperator {
 public:
  DenseOperator(Matrix entries, std::vector<int> local_dims);

  /// n-qubit operator; n is inferred from the matrix size, which must be 2^n.
  static DenseOperator qubits(Matrix entries);

  const Matrix& matrix() const noexcept { return entries_; }
  Eigen::Index dim() const noexcept { return entries_.rows(); }
  const std::vector<int>& local_dims() const noexcept { return local_dims_; }
  int n_sites() const noexcept { return static_cast<int>(local_dims_.size()); }
  double operator()(Eigen::Index i, Eigen::Index j) const { return entries_(i, j); }

  /// Common local dimension, or 0 when sites differ.
  int uniform_local_dim() const noexcept;

 private:
  Matrix entries_;
  std::vector<int> local_dims_;
};

}  // namespace stoqease
