#pragma once

#include "stoqease/dense_operator.hpp"
#include "stoqease/hamiltonian.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace stoqease {

enum class MeasureMode { dense, closed_form_2local, effective_local, smooth };
enum class Normalization { per_dimension, raw_sum };

struct MeasureSpec {
  double p = 1.0;
  MeasureMode mode = MeasureMode::dense;
  std::optional<double> alpha;  ///< required iff mode == smooth
  Normalization normalization = Normalization::per_dimension;

  void validate() const;
};

/// Positive off-diagonal entries of H; everything else zero.
DenseOperator nonstoq_part(const DenseOperator& h);

/// D^{-1} ||H+||_p (per_dimension) or ||H+||_p (raw_sum).
double nu_p_dense(const DenseOperator& h, const MeasureSpec& spec = {});
double nu_p_dense(const DenseOperator& h, double p, Normalization norm = Normalization::per_dimension);

/// Field and X_i Z_j weights seen by one vertex i.
struct XzVertex {
  double field = 0.0;
  std::vector<double> weights;
};

/// sum over sign patterns s in {+-1}^k of max{field + s.w, 0}^p (no prefactor).
double xz_pattern_sum(const XzVertex& v, double p = 1.0);

/// Uniform average over sign patterns: 2^{-k} xz_pattern_sum. This is the
/// vertex's contribution to nu1 (p = 1) or to D^{-1} ||H+||_p^p.
double xz_vertex_exact(const XzVertex& v, double p = 1.0);

struct EstimatorBudget {
  double epsilon = 0.1;
  double delta = 0.05;
  std::uint64_t seed = 0;

  void validate() const;
};

struct SampledEstimate {
  double estimate;
  std::size_t sample_count;
};

/// ceil(16 k max|x|^2 log(2/delta) / epsilon^2).
std::size_t xz_vertex_sample_count(std::size_t k, double max_abs_weight, const EstimatorBudget& budget);

/// Monte Carlo estimate of xz_vertex_exact(v, 1) from Rademacher samples;
/// within epsilon with probability >= 1 - delta.
SampledEstimate nu1_xz_vertex_sampled(const XzVertex& v, const EstimatorBudget& budget);

struct ClosedFormOptions {
  int exact_degree_cap = 20;
  /// Vertices above the cap use the sampled estimator when set, else throw.
  std::optional<EstimatorBudget> sampled_fallback;
};

/// nu1 of the (2+1)-local Hamiltonian without building it:
///   sum_{i<j} (max{a+b,0} + max{a-b,0}) / 2 + sum_i xz_vertex_exact(i).
double nu1_closed_form_2local(const CoefficientGraph& g, const ClosedFormOptions& options = {});

/// Exact ||H+||_p^p for the coefficient Hamiltonian, computed symbolically.
double positive_part_lp_power(const CoefficientGraph& g, double p);

/// D^{-1} ||H+||_p from positive_part_lp_power.
double nu_p_closed_form_2local(const CoefficientGraph& g, double p);

/// Index bookkeeping for the three-site window (h (x) 1 + 1 (x) h) of a
/// translation-invariant chain.
///
/// Window entries are <i1 i2 i3| . |j1 j2 i3> with i2 != j2, which equal
/// h(i1 i2; j1 j2) + [i1 == j1] h(i2 i3; j2 i3).
class EffectiveWindow {
 public:
  struct Entry {
    int left_row, left_col;    // index into h for the h (x) 1 part
    int right_row, right_col;  // index into h for the 1 (x) h part
    bool has_right;            // i1 == j1
  };

  explicit EffectiveWindow(int d);

  int local_dim() const noexcept { return d_; }
  std::size_t size() const noexcept { return entries_.size(); }
  const std::vector<Entry>& entries() const noexcept { return entries_; }

  double value(const Matrix& h, const Entry& e) const {
    return h(e.left_row, e.left_col) + (e.has_right ? h(e.right_row, e.right_col) : 0.0);
  }
  std::vector<double> values(const Matrix& h) const;

  /// d(sum_e phi(w_e)) / dh given per-entry weights phi'(w_e).
  Matrix pullback(std::span<const double> weights) const;

 private:
  int d_;
  std::vector<Entry> entries_;
};

/// Effective local measure: sum of positive window entries. For the closed
/// chain of n sites, ||H+||_1 = n d^{n-3} effective_local_nu1(h).
double effective_local_nu1(const TwoSiteTerm& term);

/// sum over window entries of max{w, 0}^2.
double effective_local_nu2_squared(const TwoSiteTerm& term);

/// f_alpha(x) = x + log(1 + exp(-alpha x)) / alpha; max{x, 0} once |alpha x| > 30.
double softplus_surrogate(double x, double alpha);
/// f_alpha'(x) = 1 / (1 + exp(-alpha x)).
double softplus_surrogate_derivative(double x, double alpha);

/// sum of f_alpha over the effective window entries.
double smooth_nu1(const TwoSiteTerm& term, double alpha);
/// sum of f_alpha over the off-diagonal entries of a dense matrix.
double smooth_nu1_offdiagonal(const DenseOperator& h, double alpha);

/// sum over patterns of max{s.x, 0} >= max|x_j| 2^{k-1}; k <= 20.
bool xz_lower_bound_check(std::span<const double> x);

/// sum over patterns of max{s.x, 0}^p >= 2^{p(k - degree)} sum |x_j|^p.
bool xz_lp_bound_check(std::span<const double> x, double p, int degree);

}  // namespace stoqease
