#include "stoqease/measures.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace stoqease {

void MeasureSpec::validate() const {
  if (!(p >= 1.0)) throw InvalidArgument("MeasureSpec: p must be >= 1");
  if (mode == MeasureMode::smooth) {
    if (!alpha || !(*alpha > 0.0)) throw InvalidArgument("MeasureSpec: smooth mode needs alpha > 0");
  } else if (alpha) {
    throw InvalidArgument("MeasureSpec: alpha is only meaningful in smooth mode");
  }
}

void EstimatorBudget::validate() const {
  if (!(epsilon > 0.0)) throw InvalidArgument("EstimatorBudget: epsilon must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument("EstimatorBudget: delta must lie in (0, 1)");
}

DenseOperator nonstoq_part(const DenseOperator& h) {
  Matrix plus = h.matrix().cwiseMax(0.0);
  plus.diagonal().setZero();
  return DenseOperator(std::move(plus), h.local_dims());
}

double nu_p_dense(const DenseOperator& h, double p, Normalization norm) {
  if (!(p >= 1.0)) throw InvalidArgument("nu_p_dense: p must be >= 1");
  const Matrix& m = h.matrix();
  double acc = 0.0;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (i == j || m(i, j) <= 0.0) continue;
      acc += p == 1.0 ? m(i, j) : std::pow(m(i, j), p);
    }
  }
  const double lp = p == 1.0 ? acc : std::pow(acc, 1.0 / p);
  return norm == Normalization::per_dimension ? lp / static_cast<double>(h.dim()) : lp;
}

double nu_p_dense(const DenseOperator& h, const MeasureSpec& spec) {
  spec.validate();
  if (spec.mode != MeasureMode::dense) throw InvalidArgument("nu_p_dense: spec mode must be dense");
  return nu_p_dense(h, spec.p, spec.normalization);
}

double xz_pattern_sum(const XzVertex& v, double p) {
  const std::size_t k = v.weights.size();
  if (k > 30) throw InvalidArgument("xz_pattern_sum: too many weights for enumeration");
  const std::uint64_t patterns = std::uint64_t{1} << k;
  double total = 0.0;
  for (std::uint64_t mask = 0; mask < patterns; ++mask) {
    double s = v.field;
    for (std::size_t j = 0; j < k; ++j) s += ((mask >> j) & 1) ? -v.weights[j] : v.weights[j];
    if (s > 0.0) total += p == 1.0 ? s : std::pow(s, p);
  }
  return total;
}

double xz_vertex_exact(const XzVertex& v, double p) {
  return std::ldexp(xz_pattern_sum(v, p), -static_cast<int>(v.weights.size()));
}

std::size_t xz_vertex_sample_count(std::size_t k, double max_abs_weight, const EstimatorBudget& budget) {
  budget.validate();
  const double count = 16.0 * static_cast<double>(k) * max_abs_weight * max_abs_weight *
                       std::log(2.0 / budget.delta) / (budget.epsilon * budget.epsilon);
  return static_cast<std::size_t>(std::ceil(count));
}

SampledEstimate nu1_xz_vertex_sampled(const XzVertex& v, const EstimatorBudget& budget) {
  if (v.weights.empty()) throw InvalidArgument("nu1_xz_vertex_sampled: weight list is empty");
  double max_abs_weight = 0.0;
  for (double w : v.weights) max_abs_weight = std::max(max_abs_weight, std::abs(w));
  const std::size_t count = xz_vertex_sample_count(v.weights.size(), max_abs_weight, budget);
  if (count == 0) return {std::max(v.field, 0.0), 0};

  std::mt19937_64 rng(budget.seed);
  std::bernoulli_distribution coin(0.5);
  double total = 0.0;
  for (std::size_t sample = 0; sample < count; ++sample) {
    double s = v.field;
    for (double w : v.weights) s += coin(rng) ? w : -w;
    total += std::max(s, 0.0);
  }
  return {total / static_cast<double>(count), count};
}

namespace {

double pair_term(double a, double b, double p) {
  auto pw = [p](double x) { return x <= 0.0 ? 0.0 : (p == 1.0 ? x : std::pow(x, p)); };
  return pw(a + b) + pw(a - b);
}

std::map<Edge, std::pair<double, double>> flip_pairs(const CoefficientGraph& g) {
  std::map<Edge, std::pair<double, double>> out;
  for (const auto& [e, w] : g.xx()) out[e].first += w;
  for (const auto& [e, w] : g.yy()) out[e].second += w;
  return out;
}

}  // namespace

double nu1_closed_form_2local(const CoefficientGraph& g, const ClosedFormOptions& options) {
  double total = 0.0;
  for (const auto& [e, ab] : flip_pairs(g)) total += 0.5 * pair_term(ab.first, ab.second, 1.0);
  for (int i = 0; i < g.n_qubits(); ++i) {
    XzVertex v{g.x_field()[i], g.xz_weights(i)};
    if (static_cast<int>(v.weights.size()) <= options.exact_degree_cap) {
      total += xz_vertex_exact(v);
    } else if (options.sampled_fallback) {
      EstimatorBudget budget = *options.sampled_fallback;
      budget.seed ^= 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(i + 1);
      total += nu1_xz_vertex_sampled(v, budget).estimate;
    } else {
      std::ostringstream os;
      os << "nu1_closed_form_2local: XZ degree " << v.weights.size() << " at site " << i
         << " exceeds exact cap " << options.exact_degree_cap << " and no sampling budget was given";
      throw InvalidArgument(os.str());
    }
  }
  return total;
}

double positive_part_lp_power(const CoefficientGraph& g, double p) {
  if (!(p >= 1.0)) throw InvalidArgument("positive_part_lp_power: p must be >= 1");
  const int n = g.n_qubits();
  double total = 0.0;
  for (const auto& [e, ab] : flip_pairs(g)) total += std::ldexp(pair_term(ab.first, ab.second, p), n - 1);
  for (int i = 0; i < n; ++i) {
    XzVertex v{g.x_field()[i], g.xz_weights(i)};
    total += std::ldexp(xz_pattern_sum(v, p), n - static_cast<int>(v.weights.size()));
  }
  return total;
}

double nu_p_closed_form_2local(const CoefficientGraph& g, double p) {
  const double raw = positive_part_lp_power(g, p);
  const double lp = p == 1.0 ? raw : std::pow(raw, 1.0 / p);
  return std::ldexp(lp, -g.n_qubits());
}

EffectiveWindow::EffectiveWindow(int d) : d_(d) {
  if (d < 2) throw InvalidArgument("EffectiveWindow: d must be >= 2");
  entries_.reserve(static_cast<std::size_t>(d) * d * d * d * (d - 1));
  for (int i1 = 0; i1 < d; ++i1)
    for (int i2 = 0; i2 < d; ++i2)
      for (int i3 = 0; i3 < d; ++i3)
        for (int j1 = 0; j1 < d; ++j1)
          for (int j2 = 0; j2 < d; ++j2) {
            if (i2 == j2) continue;
            entries_.push_back({i1 * d + i2, j1 * d + j2, i2 * d + i3, j2 * d + i3, i1 == j1});
          }
}

std::vector<double> EffectiveWindow::values(const Matrix& h) const {
  std::vector<double> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(value(h, e));
  return out;
}

Matrix EffectiveWindow::pullback(std::span<const double> weights) const {
  if (weights.size() != entries_.size()) throw InvalidArgument("EffectiveWindow::pullback: size mismatch");
  Matrix g = Matrix::Zero(d_ * d_, d_ * d_);
  for (std::size_t k = 0; k < entries_.size(); ++k) {
    const auto& e = entries_[k];
    g(e.left_row, e.left_col) += weights[k];
    if (e.has_right) g(e.right_row, e.right_col) += weights[k];
  }
  return g;
}

double effective_local_nu1(const TwoSiteTerm& term) {
  const EffectiveWindow window(term.local_dim());
  double total = 0.0;
  for (const auto& e : window.entries()) total += std::max(window.value(term.matrix(), e), 0.0);
  return total;
}

double effective_local_nu2_squared(const TwoSiteTerm& term) {
  const EffectiveWindow window(term.local_dim());
  double total = 0.0;
  for (const auto& e : window.entries()) {
    const double w = std::max(window.value(term.matrix(), e), 0.0);
    total += w * w;
  }
  return total;
}

double softplus_surrogate(double x, double alpha) {
  if (!(alpha > 0.0)) throw InvalidArgument("softplus_surrogate: alpha must be positive");
  const double ax = alpha * x;
  if (std::abs(ax) > 30.0) return std::max(x, 0.0);
  return x + std::log1p(std::exp(-ax)) / alpha;
}

double softplus_surrogate_derivative(double x, double alpha) {
  const double ax = alpha * x;
  if (ax >= 0.0) return 1.0 / (1.0 + std::exp(-ax));
  const double e = std::exp(ax);
  return e / (1.0 + e);
}

double smooth_nu1(const TwoSiteTerm& term, double alpha) {
  const EffectiveWindow window(term.local_dim());
  double total = 0.0;
  for (const auto& e : window.entries()) total += softplus_surrogate(window.value(term.matrix(), e), alpha);
  return total;
}

double smooth_nu1_offdiagonal(const DenseOperator& h, double alpha) {
  const Matrix& m = h.matrix();
  double total = 0.0;
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (i != j) total += softplus_surrogate(m(i, j), alpha);
  return total;
}

bool xz_lower_bound_check(std::span<const double> x) {
  if (x.empty() || x.size() > 20) throw InvalidArgument("xz_lower_bound_check: need 1 <= k <= 20");
  XzVertex v{0.0, {x.begin(), x.end()}};
  double max_abs_weight = 0.0;
  for (double w : x) max_abs_weight = std::max(max_abs_weight, std::abs(w));
  const double lhs = xz_pattern_sum(v);
  const double rhs = std::ldexp(max_abs_weight, static_cast<int>(x.size()) - 1);
  return lhs >= rhs * (1.0 - 1e-12);
}

bool xz_lp_bound_check(std::span<const double> x, double p, int degree) {
  if (x.empty() || x.size() > 20) throw InvalidArgument("xz_lp_bound_check: need 1 <= k <= 20");
  XzVertex v{0.0, {x.begin(), x.end()}};
  double sum = 0.0;
  for (double w : x) sum += std::pow(std::abs(w), p);
  const double lhs = xz_pattern_sum(v, p);
  const double rhs = std::pow(2.0, p * (static_cast<double>(x.size()) - degree)) * sum;
  return lhs >= rhs * (1.0 - 1e-12);
}

}  // namespace stoqease
