#include "stoqease/qmc.hpp"

#include "stoqease/hamiltonian.hpp"
#include "stoqease/measures.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace stoqease {

void QmcParams::validate() const {
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw InvalidArgument("QmcParams: beta must be finite and >= 0");
  if (m < 1) throw InvalidArgument("QmcParams: m must be >= 1");
}

DenseOperator transfer_matrix(const DenseOperator& h, const QmcParams& params) {
  params.validate();
  Matrix t = -(params.beta / params.m) * h.matrix();
  t.diagonal().array() += 1.0;
  return DenseOperator(std::move(t), h.local_dims());
}

bool diagonal_condition(const DenseOperator& h, const QmcParams& params) {
  params.validate();
  return ((params.beta / params.m) * h.matrix().diagonal().array() <= 1.0).all();
}

double trace_power(const Matrix& symmetric, int m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetric, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("trace_power: eigensolver failed");
  double total = 0.0;
  for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k) total += std::pow(solver.eigenvalues()(k), m);
  return total;
}

Matrix entrywise_abs(const Matrix& a) { return a.cwiseAbs(); }

AverageSign average_sign(const DenseOperator& h, const QmcParams& params) {
  const Matrix t = transfer_matrix(h, params).matrix();
  const double signed_trace = trace_power(t, params.m);
  const double absolute_trace = trace_power(entrywise_abs(t), params.m);
  if (!std::isfinite(absolute_trace) || !(absolute_trace > std::numeric_limits<double>::min())) {
    throw NumericalError("average_sign: tr[|T|^m] is not a positive finite number");
  }
  const double value = std::clamp(signed_trace / absolute_trace, -1.0, 1.0);
  return {value, signed_trace, absolute_trace, diagonal_condition(h, params)};
}

double sample_complexity_proxy(const DenseOperator& h, const QmcParams& params) {
  const double s = average_sign(h, params).value;
  if (std::abs(s) <= kVanishingSign) return std::numeric_limits<double>::infinity();
  return std::max(0.0, 1.0 / (s * s) - 1.0);
}

NegativePathGap negative_path_gap(const DenseOperator& h, const QmcParams& params,
                                  const std::optional<OrthogonalPoint>& o) {
  const DenseOperator rotated = o ? conjugate_onsite(h, *o) : h;
  const Matrix t = transfer_matrix(rotated, params).matrix();
  const Matrix abs_t = entrywise_abs(t);
  const double absolute_trace = trace_power(abs_t, params.m);
  const double signed_trace = trace_power(t, params.m);

  const Matrix positive = 0.5 * (abs_t + t);
  const Matrix negative = 0.5 * (abs_t - t);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(positive);
  if (solver.info() != Eigen::Success) throw NumericalError("negative_path_gap: eigensolver failed");
  const int exponent = params.m - 1;
  const Vector powered = solver.eigenvalues().unaryExpr([exponent](double x) { return std::pow(x, exponent); });
  const Matrix positive_power = solver.eigenvectors() * powered.asDiagonal() * solver.eigenvectors().transpose();
  // sum_{a,b} Delta-(a|b) P(b|a) = <Delta-, P^T>_F, with P symmetric.
  const double first_order = 2.0 * params.m * negative.cwiseProduct(positive_power).sum();
  return {absolute_trace - signed_trace, first_order, absolute_trace};
}

std::vector<SignStudyRow> sign_vs_nonstoq_study(const DenseOperator& h_base, std::span<const double> alpha_grid,
                                                const QmcParams& params) {
  std::vector<SignStudyRow> rows;
  rows.reserve(alpha_grid.size());
  for (double alpha : alpha_grid) {
    const DenseOperator h = alpha_family(h_base, alpha);
    const double s = average_sign(h, params).value;
    const double inverse = s > kVanishingSign ? 1.0 / s : std::numeric_limits<double>::infinity();
    rows.push_back({alpha, nu_p_dense(h, 1.0), inverse});
  }
  return rows;
}

namespace {

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&v](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double spearman_correlation(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("spearman_correlation: need two equal-length samples");
  for (double v : x)
    if (std::isnan(v)) throw InvalidArgument("spearman_correlation: NaN in sample");
  for (double v : y)
    if (std::isnan(v)) throw InvalidArgument("spearman_correlation: NaN in sample");
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const double n = static_cast<double>(x.size());
  const double mean = (n + 1.0) / 2.0;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mean) * (ry[i] - mean);
    sxx += (rx[i] - mean) * (rx[i] - mean);
    syy += (ry[i] - mean) * (ry[i] - mean);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace stoqease
