#include "oracles.hpp"

#include "stoqease/hamiltonian.hpp"
#include "stoqease/measures.hpp"

#include <doctest.h>

#include <random>

using namespace stoqease;

namespace {

CoefficientGraph random_graph(int n, std::mt19937_64& rng, double density = 0.6) {
  std::uniform_real_distribution<double> u(-1, 1), coin(0, 1);
  CoefficientGraph g(n);
  for (int i = 0; i < n; ++i) {
    g.add_x(i, u(rng));
    g.add_z(i, u(rng));
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      if (i < j && coin(rng) < density) {
        g.add_xx(i, j, u(rng));
        g.add_yy(i, j, u(rng));
        g.add_zz(i, j, u(rng));
      }
      if (coin(rng) < density / 2) g.add_xz(i, j, u(rng));
    }
  }
  return g;
}

// Brute force over sign patterns, kept independent of the library's Gray-code loop.
double pattern_average(double field, const std::vector<double>& w, double p) {
  const std::size_t k = w.size();
  double total = 0.0;
  for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
    double s = field;
    for (std::size_t j = 0; j < k; ++j) s += (mask >> j & 1) ? -w[j] : w[j];
    total += std::pow(std::max(s, 0.0), p);
  }
  return total / static_cast<double>(std::size_t{1} << k);
}

}  // namespace

TEST_CASE("nu_p on dense matrices") {
  Matrix h(3, 3);
  h << 1, 2, -1, 2, 0, 0.5, -1, 0.5, 3;
  const DenseOperator op(h, {3});
  CHECK(nu_p_dense(op, 1.0) == doctest::Approx(5.0 / 3));
  CHECK(nu_p_dense(op, 2.0) == doctest::Approx(std::sqrt(8.5) / 3));
  CHECK(nu_p_dense(op, 1.0, Normalization::raw_sum) == doctest::Approx(5.0));
  const Matrix plus = nonstoq_part(op).matrix();
  CHECK(plus(0, 1) == 2.0);
  CHECK(plus(0, 2) == 0.0);
  CHECK(plus.diagonal().isZero());
  // Diagonal entries never count.
  CHECK(nu_p_dense(DenseOperator::qubits(Matrix::Identity(4, 4) * 7)) == 0.0);
  CHECK_THROWS_AS(nu_p_dense(op, 0.5), InvalidArgument);
}

TEST_CASE("nu1 is scale covariant and basis dependent") {
  const DenseOperator h = example_sign_free(3);
  const DenseOperator scaled(h.matrix() * 2.5, h.local_dims());
  CHECK(nu_p_dense(scaled) == doctest::Approx(2.5 * nu_p_dense(h)));
  // Hadamard-like rotation of X fields turns them into Z fields.
  Matrix r(2, 2);
  r << 1, 1, 1, -1;
  r /= std::sqrt(2.0);
  const DenseOperator x = pauli_embed(Pauli::X, 0, 1);
  CHECK(nu_p_dense(x) == doctest::Approx(1.0));
  CHECK(nu_p_dense(conjugate_onsite(x, OrthogonalPoint(r))) == doctest::Approx(0.0));
}

TEST_CASE("vertex sums against brute force") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int k = 0; k <= 8; ++k) {
    XzVertex v{u(rng), {}};
    for (int j = 0; j < k; ++j) v.weights.push_back(u(rng));
    for (double p : {1.0, 1.5, 2.0}) {
      CHECK(xz_vertex_exact(v, p) == doctest::Approx(pattern_average(v.field, v.weights, p)));
    }
  }
  CHECK(xz_vertex_exact({-0.3, {}}) == 0.0);
  CHECK(xz_vertex_exact({0.3, {}}) == doctest::Approx(0.3));
}

TEST_CASE("closed form matches dense nu1 on random graphs") {
  std::mt19937_64 rng(1234);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + trial % 5;
    const CoefficientGraph g = random_graph(n, rng);
    const double dense = oracle::nu1(build_coefficient_hamiltonian(g).matrix());
    CAPTURE(trial);
    CHECK(std::abs(nu1_closed_form_2local(g) - dense) <= 1e-10 * std::max(1.0, std::abs(dense)));
  }
}

TEST_CASE("closed form for p > 1 matches the dense norm") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 10; ++trial) {
    const CoefficientGraph g = random_graph(3 + trial % 3, rng);
    const Matrix h = build_coefficient_hamiltonian(g).matrix();
    for (double p : {1.0, 2.0, 3.0}) {
      const double dense = oracle::positive_offdiag_power(h, p);
      CHECK(positive_part_lp_power(g, p) == doctest::Approx(dense).epsilon(1e-10));
      CHECK(nu_p_closed_form_2local(g, p) ==
            doctest::Approx(std::pow(dense, 1 / p) / static_cast<double>(h.rows())).epsilon(1e-10));
    }
  }
}

TEST_CASE("closed form degree cap") {
  CoefficientGraph g(24);
  for (int j = 1; j < 24; ++j) g.add_xz(0, j, 0.1);
  ClosedFormOptions strict;
  strict.exact_degree_cap = 20;
  CHECK_THROWS_AS(nu1_closed_form_2local(g, strict), InvalidArgument);
  ClosedFormOptions sampled = strict;
  sampled.sampled_fallback = EstimatorBudget{0.05, 0.05, 3};
  // Exact value 0.1 E[max(S, 0)] for S a sum of 23 Rademacher signs, via the binomial law.
  double exact = 0.0;
  for (int plus = 0; plus <= 23; ++plus) {
    const double s = 2.0 * plus - 23;
    exact += std::exp(std::lgamma(24) - std::lgamma(plus + 1) - std::lgamma(24 - plus) - 23 * std::log(2.0)) *
             std::max(0.1 * s, 0.0);
  }
  const double est = nu1_closed_form_2local(g, sampled);
  CHECK(nu1_closed_form_2local(g, sampled) == est);
  CHECK(std::abs(est - exact) < 0.05);
}

TEST_CASE("sample count formula") {
  EstimatorBudget b{0.1, 0.05, 0};
  const double expected = std::ceil(16 * 4 * 1.0 * std::log(2 / 0.05) / 0.01);
  CHECK(xz_vertex_sample_count(4, 1.0, b) == static_cast<std::size_t>(expected));
  CHECK(xz_vertex_sample_count(4, 1.0, b) == 23609);
  CHECK(xz_vertex_sample_count(0, 1.0, b) == 0);
  CHECK_THROWS_AS(EstimatorBudget({0.0, 0.05, 0}).validate(), InvalidArgument);
  CHECK_THROWS_AS(EstimatorBudget({0.1, 1.0, 0}).validate(), InvalidArgument);
}

TEST_CASE("sampled vertex estimate is close and deterministic") {
  const XzVertex v{0.2, {0.5, -0.7, 0.3, 0.9, -0.1}};
  const EstimatorBudget b{0.05, 0.01, 77};
  const SampledEstimate a = nu1_xz_vertex_sampled(v, b);
  CHECK(std::abs(a.estimate - xz_vertex_exact(v)) < b.epsilon);
  CHECK(nu1_xz_vertex_sampled(v, b).estimate == a.estimate);
  CHECK(a.sample_count == xz_vertex_sample_count(5, 0.9, b));
}

TEST_CASE("window identity: chain positive sum = n d^(n-3) * effective nu1") {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g;
  for (int d : {2, 3})
    for (int n : {4, 5}) {
      if (d == 3 && n == 5) continue;
      Matrix h(d * d, d * d);
      for (int i = 0; i < d * d; ++i)
        for (int j = 0; j < d * d; ++j) h(i, j) = g(rng);
      h = ((h + h.transpose()) / 2).eval();
      const double lhs = oracle::positive_offdiag_power(oracle::chain(h, d, n), 1.0);
      const double rhs = n * std::pow(d, n - 3) * effective_local_nu1(TwoSiteTerm(d, h));
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    }
}

TEST_CASE("effective window entries") {
  const int d = 3;
  const EffectiveWindow w(d);
  // (i1, i2, i3) x (j1, j2) with i2 != j2.
  CHECK(w.size() == static_cast<std::size_t>(d * d * d * d * (d - 1)));
  Matrix h = Matrix::Zero(9, 9);
  h(0 * 3 + 1, 0 * 3 + 2) = 1.5;  // <0 1|h|0 2>
  h(1 * 3 + 0, 2 * 3 + 0) = 0.25;  // <1 0|h|2 0>
  const auto values = w.values(h);
  int hits_combined = 0;
  for (std::size_t e = 0; e < w.size(); ++e)
    if (std::abs(values[e] - 1.75) < 1e-15) ++hits_combined;
  // <0 1 0|window|0 2 0> is the only entry seeing both parts.
  CHECK(hits_combined == 1);
}

TEST_CASE("window pullback is the gradient of a weighted sum") {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> g;
  const EffectiveWindow w(2);
  Matrix h(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) h(i, j) = g(rng);
  std::vector<double> weights(w.size());
  for (auto& x : weights) x = g(rng);
  auto f = [&](const Matrix& m) {
    const auto v = w.values(m);
    double s = 0;
    for (std::size_t e = 0; e < v.size(); ++e) s += weights[e] * v[e];
    return s;
  };
  CHECK((w.pullback(weights) - oracle::finite_difference(f, h)).cwiseAbs().maxCoeff() < 1e-7);
}

TEST_CASE("softplus surrogate") {
  CHECK(softplus_surrogate(0.0, 10.0) == doctest::Approx(std::log(2.0) / 10));
  CHECK(softplus_surrogate(5.0, 10.0) == 5.0);
  CHECK(softplus_surrogate(-5.0, 10.0) == 0.0);
  CHECK(softplus_surrogate_derivative(0.0, 3.0) == doctest::Approx(0.5));
  for (double x : {-0.2, 0.01, 0.3}) {
    const double fd = (softplus_surrogate(x + 1e-6, 7.0) - softplus_surrogate(x - 1e-6, 7.0)) / 2e-6;
    CHECK(softplus_surrogate_derivative(x, 7.0) == doctest::Approx(fd).epsilon(1e-6));
    CHECK(softplus_surrogate(x, 7.0) >= std::max(x, 0.0));
  }
  // The smooth objective approaches the hard one as alpha grows.
  const TwoSiteTerm t = random_gaussian_term(2, 9);
  CHECK(smooth_nu1(t, 1e4) == doctest::Approx(effective_local_nu1(t)).epsilon(1e-2));
}

TEST_CASE("xz lower bounds") {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int k = 1; k <= 10; ++k) {
    std::vector<double> x(k);
    for (auto& v : x) v = u(rng);
    CHECK(xz_lower_bound_check(x));
    CHECK(xz_lp_bound_check(x, 2.0, k));
  }
}

TEST_CASE("MeasureSpec validation") {
  MeasureSpec s;
  s.mode = MeasureMode::smooth;
  CHECK_THROWS_AS(s.validate(), InvalidArgument);
  s.alpha = 5.0;
  CHECK_NOTHROW(s.validate());
  s.p = 0.9;
  CHECK_THROWS_AS(s.validate(), InvalidArgument);
}
