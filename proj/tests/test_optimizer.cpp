#include "oracles.hpp"

#include "stoqease/hamiltonian.hpp"
#include "stoqease/measures.hpp"
#include "stoqease/optimizer.hpp"
#include "stoqease/orthogonal.hpp"

#include <doctest.h>

using namespace stoqease;

namespace {

Matrix conjugated_term(const Matrix& o, const Matrix& h) {
  const Matrix c = oracle::kron(o, o);
  return c * h * c.transpose();
}

// Window positive sum built from a dense three-site window, no index tables.
double window_oracle(const Matrix& h, int d, double alpha, bool squared) {
  const Matrix w = oracle::kron(h, Matrix::Identity(d, d)) + oracle::kron(Matrix::Identity(d, d), h);
  double total = 0.0;
  for (int a = 0; a < d * d * d; ++a)
    for (int b = 0; b < d * d * d; ++b) {
      const int a2 = a / d % d, b2 = b / d % d;
      if (a2 == b2 || a % d != b % d) continue;
      const double x = w(a, b);
      total += squared ? std::pow(std::max(x, 0.0), 2) : softplus_surrogate(x, alpha);
    }
  return total;
}

}  // namespace

TEST_CASE("window objectives match a dense window") {
  for (int d : {2, 3}) {
    const TwoSiteTerm t = random_gaussian_term(d, 31);
    const Matrix o = haar_random_orthogonal(d, 5).matrix();
    const Matrix h = conjugated_term(o, t.matrix());
    const WindowObjective smooth({ObjectiveKind::smooth_nu1, 20.0, t});
    const WindowObjective nu2({ObjectiveKind::nu2_squared, 0.0, t});
    CHECK(smooth.value(o) == doctest::Approx(window_oracle(h, d, 20.0, false)));
    CHECK(nu2.value(o) == doctest::Approx(window_oracle(h, d, 0.0, true)));
    CHECK(smooth.hard_nu1(o) == doctest::Approx(effective_local_nu1(TwoSiteTerm(d, (h + h.transpose()) / 2))));
  }
}

TEST_CASE("euclidean gradients agree with finite differences") {
  for (int d : {2, 3, 4})
    for (auto kind : {ObjectiveKind::smooth_nu1, ObjectiveKind::nu2_squared}) {
      const TwoSiteTerm t = random_gaussian_term(d, 100 + d);
      const WindowObjective f({kind, 10.0, t});
      const Matrix o = haar_random_orthogonal(d, 7 + d).matrix();
      const Matrix fd = oracle::finite_difference([&](const Matrix& x) { return f.value(x); }, o);
      const Matrix g = f.gradient(o);
      CAPTURE(d);
      CHECK((g - fd).cwiseAbs().maxCoeff() <= 1e-6 * std::max(1.0, g.cwiseAbs().maxCoeff()));
    }
}

TEST_CASE("CG iterates stay orthogonal and decrease the objective") {
  const TwoSiteTerm t = random_gaussian_term(3, 8);
  const WindowObjective f({ObjectiveKind::smooth_nu1, 50.0, t});
  OptimizerConfig cfg;
  CgState s = cg_initialize(haar_random_orthogonal(3, 1).matrix(), f);
  double previous = s.objective;
  for (int k = 0; k < 200 && !s.converged; ++k) {
    s = riemannian_step(s, f.gradient(s.point), f, cfg);
    CHECK(s.objective <= previous + 1e-12);
    previous = s.objective;
  }
  CHECK(orthogonality_defect(s.point) < 1e-10);
}

TEST_CASE("zero gradient leaves the point unchanged") {
  const TwoSiteTerm t(2, -Matrix::Ones(4, 4));
  const WindowObjective f({ObjectiveKind::nu2_squared, 0.0, t});
  const CgState s = cg_initialize(Matrix::Identity(2, 2), f);
  const CgState next = riemannian_step(s, Matrix::Zero(2, 2), f, OptimizerConfig{});
  CHECK(next.converged);
  CHECK((next.point - s.point).norm() == 0.0);
}

TEST_CASE("initial points") {
  OptimizerConfig cfg;
  cfg.init = InitKind::identity;
  CHECK((initial_point(3, cfg, 1).matrix() - Matrix::Identity(3, 3)).norm() == 0.0);
  cfg.init = InitKind::perturbed_identity;
  const Matrix p = initial_point(3, cfg, 1).matrix();
  CHECK((p - Matrix::Identity(3, 3)).norm() > 0.0);
  CHECK((p - Matrix::Identity(3, 3)).norm() < 0.1);
  cfg.init = InitKind::haar_random;
  CHECK((initial_point(3, cfg, 4).matrix() - haar_random_orthogonal(3, 4).matrix()).norm() == 0.0);
}

TEST_CASE("optimizer recovers a scrambled stoquastic term") {
  OptimizerConfig cfg;
  cfg.seed = 3;
  int recovered = 0;
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto inst = random_stoquastic_instance(2, seed);
    cfg.seed = seed;
    const OptimizationResult r = optimize(inst.scrambled, cfg);
    CHECK(orthogonality_defect(r.point.matrix()) < 1e-10);
    CHECK(r.trace.hard_end <= r.trace.hard_identity + 1e-12);
    CHECK(r.trace.hard_end == doctest::Approx(hard_effective_nu1(r.point, inst.scrambled)));
    if (r.trace.hard_end <= 1e-5 * inst.scrambled.matrix().cwiseAbs().maxCoeff()) ++recovered;
  }
  CHECK(recovered >= 4);
}

TEST_CASE("optimize is deterministic") {
  const TwoSiteTerm t = build_ladder(LadderParams::frustrated(1, 1, 1, 4)).term;
  OptimizerConfig cfg;
  cfg.init = InitKind::perturbed_identity;
  cfg.alpha = 40;
  cfg.max_iters = 300;
  cfg.seed = 9;
  const OptimizationResult a = optimize(t, cfg), b = optimize(t, cfg);
  CHECK((a.point.matrix() - b.point.matrix()).norm() == 0.0);
  CHECK(a.trace.selected == b.trace.selected);
  CHECK(a.trace.hard_end < a.trace.hard_identity);
}

TEST_CASE("optimizer config validation") {
  OptimizerConfig cfg;
  cfg.max_iters = -1;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg = {};
  cfg.alpha = -1;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg = {};
  cfg.line_search.backtracking_factor = 1.0;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg = {};
  cfg.restarts = 0;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
}
