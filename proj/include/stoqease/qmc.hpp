#pragma once

#include "stoqease/dense_operator.hpp"
#include "stoqease/orthogonal.hpp"

#include <optional>
#include <span>
#include <vector>

namespace stoqease {

/// World-line discretisation: inverse temperature and number of steps.
struct QmcParams {
  double beta = 1.0;
  int m = 100;

  void validate() const;
};

/// T = 1 - (beta/m) H.
DenseOperator transfer_matrix(const DenseOperator& h, const QmcParams& params);

/// True when every diagonal entry of beta H / m is <= 1, so that a
/// stoquastic H yields an entrywise non-negative T.
bool diagonal_condition(const DenseOperator& h, const QmcParams& params);

/// tr[A^m] for symmetric A via its eigenvalues.
double trace_power(const Matrix& symmetric, int m);

/// Entrywise absolute value |A|. This is never the operator absolute value.
Matrix entrywise_abs(const Matrix& a);

struct AverageSign {
  double value;                ///< tr[T^m] / tr[|T|^m], in [-1, 1]
  double signed_trace;         ///< tr[T^m]
  double absolute_trace;       ///< tr[|T|^m]
  bool diagonal_condition_ok;  ///< see diagonal_condition
};

/// Exact average sign of world-line QMC. Throws NumericalError when
/// tr[|T|^m] is not a positive finite number.
AverageSign average_sign(const DenseOperator& h, const QmcParams& params);

/// |sign| at or below this is reported as a vanishing average sign.
inline constexpr double kVanishingSign = 1e-12;

/// Relative variance proxy <sign>^-2 - 1; +infinity when the sign vanishes.
double sample_complexity_proxy(const DenseOperator& h, const QmcParams& params);

struct NegativePathGap {
  double s_value;         ///< tr|T'|^m - tr T^m for T' = O^{(x)n} T O^{T(x)n}
  double first_order;     ///< 2m sum Delta-(a|b) (Delta+^{m-1})(b|a)
  double absolute_trace;  ///< tr|T'|^m
};

/// Decomposes the gap between tr|T|^m and tr T^m in the basis rotated by O
/// (identity when absent). Delta+- = (|T'| +- T') / 2.
NegativePathGap negative_path_gap(const DenseOperator& h, const QmcParams& params,
                                  const std::optional<OrthogonalPoint>& o = std::nullopt);

struct SignStudyRow {
  double alpha;
  double nu1;           ///< nu1(H_alpha)
  double inverse_sign;  ///< 1 / <sign>, +infinity when the sign vanishes or is negative
};

/// nu1 and inverse average sign along the family H_alpha.
std::vector<SignStudyRow> sign_vs_nonstoq_study(const DenseOperator& h_base, std::span<const double> alpha_grid,
                                                const QmcParams& params);

/// Spearman rank correlation with average ranks for ties; +infinity ranks last.
double spearman_correlation(std::span<const double> x, std::span<const double> y);

}  // namespace stoqease
