#include "oracles.hpp"

#include "stoqease/hamiltonian.hpp"
#include "stoqease/measures.hpp"
#include "stoqease/qmc.hpp"

#include <doctest.h>

#include <random>

using namespace stoqease;

namespace {

DenseOperator random_qubit_operator(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  const int dim = 1 << n;
  Matrix a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = g(rng);
  return DenseOperator::qubits((a + a.transpose()) / 2);
}

}  // namespace

TEST_CASE("average sign equals the ratio of path sums") {
  for (std::uint64_t seed : {1, 2, 3}) {
    const DenseOperator h = random_qubit_operator(2, seed);
    const QmcParams params{0.7, 5};
    const AverageSign s = average_sign(h, params);
    const auto [signed_sum, abs_sum] = oracle::path_traces(transfer_matrix(h, params).matrix(), params.m);
    CHECK(s.signed_trace == doctest::Approx(signed_sum).epsilon(1e-10));
    CHECK(s.absolute_trace == doctest::Approx(abs_sum).epsilon(1e-10));
    CHECK(s.value == doctest::Approx(signed_sum / abs_sum).epsilon(1e-10));
    CHECK(std::abs(s.value) <= 1.0 + 1e-12);
  }
}

TEST_CASE("stoquastic Hamiltonians have unit sign") {
  Matrix h = -Matrix::Ones(4, 4);
  h.diagonal().setConstant(0.5);
  const DenseOperator op = DenseOperator::qubits(h);
  const QmcParams params{1.0, 20};
  CHECK(diagonal_condition(op, params));
  CHECK(average_sign(op, params).value == doctest::Approx(1.0));
  CHECK(sample_complexity_proxy(op, params) == doctest::Approx(0.0).epsilon(1e-12));
  // A large positive diagonal makes T negative on the diagonal.
  Matrix big = h;
  big.diagonal().setConstant(100.0);
  CHECK_FALSE(diagonal_condition(DenseOperator::qubits(big), params));
}

TEST_CASE("transfer matrix and trace power") {
  const DenseOperator h = example_sign_free(2);
  const QmcParams params{2.0, 8};
  const Matrix t = transfer_matrix(h, params).matrix();
  CHECK((t - (Matrix::Identity(4, 4) - 0.25 * h.matrix())).norm() < 1e-15);
  Matrix p = Matrix::Identity(4, 4);
  for (int k = 0; k < 8; ++k) p = p * t;
  CHECK(trace_power(t, 8) == doctest::Approx(p.trace()));
  CHECK(entrywise_abs(-t).minCoeff() >= 0.0);
}

TEST_CASE("sign-free example is sign-free despite nu1 > 0") {
  for (int n : {2, 3, 4}) {
    const DenseOperator h = example_sign_free(n);
    CHECK(nu_p_dense(h) == doctest::Approx(n));
    for (double beta : {0.5, 2.0})
      for (int m : {10, 40}) {
        const AverageSign s = average_sign(h, {beta, m});
        CHECK(s.value == doctest::Approx(1.0).epsilon(1e-12));
      }
  }
}

TEST_CASE("fine-tuned example") {
  const double a = 0.3, b = 0.8, beta = 1.0;
  const int m = 4;
  const DenseOperator h = example_fine_tuned(a, b, beta, m);
  Matrix expected_t(4, 4);
  expected_t << 0, 1, -b, 0, 1, 0, 1, a, -b, 1, 0, 1, 0, a, 1, 0;
  CHECK((transfer_matrix(h, {beta, m}).matrix() - expected_t).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(nu_p_dense(h) == doctest::Approx(b * m / (2 * beta)));
  // For odd m and a = b the negative paths cancel the positive ones exactly.
  for (int odd : {3, 5, 7}) {
    const DenseOperator tuned = example_fine_tuned(0.6, 0.6, beta, odd);
    CHECK(std::abs(average_sign(tuned, {beta, odd}).value) < 1e-12);
  }
}

TEST_CASE("negative path gap decomposition") {
  const DenseOperator h = random_qubit_operator(2, 44);
  const QmcParams params{0.5, 6};
  const NegativePathGap g = negative_path_gap(h, params);
  const AverageSign s = average_sign(h, params);
  CHECK(g.s_value == doctest::Approx(s.absolute_trace - s.signed_trace).epsilon(1e-10));
  CHECK(g.absolute_trace == doctest::Approx(s.absolute_trace).epsilon(1e-10));
  // Rotating by an orthogonal O changes the gap but not tr T^m.
  Matrix r(2, 2);
  r << std::cos(0.4), -std::sin(0.4), std::sin(0.4), std::cos(0.4);
  const OrthogonalPoint o(r);
  const NegativePathGap rotated = negative_path_gap(h, params, o);
  const AverageSign rs = average_sign(conjugate_onsite(h, o), params);
  CHECK(rotated.s_value == doctest::Approx(rs.absolute_trace - rs.signed_trace).epsilon(1e-10));
  CHECK(rs.signed_trace == doctest::Approx(s.signed_trace).epsilon(1e-10));
}

TEST_CASE("first order term of the gap") {
  // With a tiny negative part Delta-, the gap is 2 m tr(Delta- Delta+^{m-1}) to leading order.
  Matrix t = Matrix::Constant(4, 4, 0.2);
  t(0, 3) = t(3, 0) = -1e-5;
  const Matrix h = (Matrix::Identity(4, 4) - t) * 4.0;  // beta / m = 1/4
  const NegativePathGap g = negative_path_gap(DenseOperator::qubits(h), {1.0, 4});
  CHECK(g.first_order == doctest::Approx(g.s_value).epsilon(1e-3));
}

TEST_CASE("average sign failures") {
  CHECK_THROWS_AS(QmcParams({-1.0, 4}).validate(), InvalidArgument);
  CHECK_THROWS_AS(QmcParams({1.0, 0}).validate(), InvalidArgument);
  Matrix x(2, 2);
  x << 0, 1, 1, 0;
  CHECK_THROWS_AS(average_sign(DenseOperator::qubits(x), {1e308, 2}), NumericalError);
}

TEST_CASE("sign study along the alpha family") {
  const DenseOperator h = build_chain({4, random_gaussian_term(2, 12)});
  std::vector<double> grid;
  for (int i = 0; i < 8; ++i) grid.push_back(1.0 + 7.0 * i);
  const auto rows = sign_vs_nonstoq_study(h, grid, {1.0, 50});
  REQUIRE(rows.size() == grid.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].alpha == grid[i]);
    CHECK(rows[i].nu1 == doctest::Approx(grid[i] / h.dim()));
    CHECK(rows[i].inverse_sign >= 1.0 - 1e-12);
  }
}

TEST_CASE("spearman correlation") {
  const std::vector<double> x{1, 2, 3, 4, 5};
  CHECK(spearman_correlation(x, std::vector<double>{2, 4, 6, 8, 10}) == doctest::Approx(1.0));
  CHECK(spearman_correlation(x, std::vector<double>{5, 4, 3, 2, 1}) == doctest::Approx(-1.0));
  const double inf = std::numeric_limits<double>::infinity();
  CHECK(spearman_correlation(x, std::vector<double>{1, 2, 3, inf, inf}) == doctest::Approx(oracle::spearman(x, {1, 2, 3, 4, 4})));
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> u(0, 4);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> a(9), b(9);
    for (auto& v : a) v = u(rng);
    for (auto& v : b) v = u(rng);
    CHECK(spearman_correlation(a, b) == doctest::Approx(oracle::spearman(a, b)));
  }
  CHECK_THROWS_AS(spearman_correlation(x, std::vector<double>{1, 2}), InvalidArgument);
}
