#include "stoqease/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

namespace stoqease {

void ObjectiveSpec::validate() const {
  if (measure == ObjectiveKind::smooth_nu1 && !(alpha > 0.0)) {
    throw InvalidArgument("ObjectiveSpec: smooth_nu1 needs alpha > 0");
  }
  if (term.local_dim() < 2) throw InvalidArgument("ObjectiveSpec: local dimension must be >= 2");
}

void OptimizerConfig::validate() const {
  if (max_iters < 0) throw InvalidArgument("OptimizerConfig: max_iters must be >= 0");
  if (!(gradient_tolerance > 0.0)) throw InvalidArgument("OptimizerConfig: gradient_tolerance must be positive");
  if (!(line_search.backtracking_factor > 0.0 && line_search.backtracking_factor < 1.0)) {
    throw InvalidArgument("OptimizerConfig: backtracking factor must lie in (0, 1)");
  }
  if (!(line_search.sufficient_decrease > 0.0 && line_search.sufficient_decrease < 1.0)) {
    throw InvalidArgument("OptimizerConfig: sufficient-decrease constant must lie in (0, 1)");
  }
  if (line_search.max_halvings < 1) throw InvalidArgument("OptimizerConfig: max_halvings must be >= 1");
  if (restart_period < 0) throw InvalidArgument("OptimizerConfig: restart_period must be >= 0");
  if (!(perturbation > 0.0)) throw InvalidArgument("OptimizerConfig: perturbation must be positive");
  if (!(alpha > 0.0)) throw InvalidArgument("OptimizerConfig: alpha must be positive");
  if (restarts < 1) throw InvalidArgument("OptimizerConfig: restarts must be >= 1");
}

WindowObjective::WindowObjective(ObjectiveSpec spec) : spec_(std::move(spec)), window_(spec_.term.local_dim()) {
  spec_.validate();
}

Matrix WindowObjective::conjugated(const Matrix& o) const {
  if (o.rows() != local_dim() || o.cols() != local_dim()) {
    throw InvalidArgument("WindowObjective: dimension mismatch between O and the term");
  }
  const Matrix c = kron(o, o);
  return c * spec_.term.matrix() * c.transpose();
}

double WindowObjective::value(const Matrix& o) const {
  const Matrix h = conjugated(o);
  double total = 0.0;
  for (const auto& e : window_.entries()) {
    const double w = window_.value(h, e);
    if (spec_.measure == ObjectiveKind::nu2_squared) {
      if (w > 0.0) total += w * w;
    } else {
      total += softplus_surrogate(w, spec_.alpha);
    }
  }
  return total;
}

double WindowObjective::hard_nu1(const Matrix& o) const {
  const Matrix h = conjugated(o);
  double total = 0.0;
  for (const auto& e : window_.entries()) total += std::max(window_.value(h, e), 0.0);
  return total;
}

Matrix WindowObjective::gradient(const Matrix& o) const {
  const int d = local_dim();
  const Matrix c = kron(o, o);
  const Matrix& h0 = spec_.term.matrix();
  const Matrix h = c * h0 * c.transpose();

  std::vector<double> weights;
  weights.reserve(window_.size());
  for (const auto& e : window_.entries()) {
    const double w = window_.value(h, e);
    weights.push_back(spec_.measure == ObjectiveKind::nu2_squared ? 2.0 * std::max(w, 0.0)
                                                                   : softplus_surrogate_derivative(w, spec_.alpha));
  }
  // dF/dh(O), then through h(O) = C h C^T: dF/dC = G C h^T + G^T C h.
  const Matrix g = window_.pullback(weights);
  const Matrix dc = g * c * h0.transpose() + g.transpose() * c * h0;

  // C(m1 m2, n1 n2) = O(m1, n1) O(m2, n2).
  Matrix gamma = Matrix::Zero(d, d);
  for (int m1 = 0; m1 < d; ++m1)
    for (int m2 = 0; m2 < d; ++m2)
      for (int n1 = 0; n1 < d; ++n1)
        for (int n2 = 0; n2 < d; ++n2) {
          const double w = dc(m1 * d + m2, n1 * d + n2);
          gamma(m1, n1) += w * o(m2, n2);
          gamma(m2, n2) += w * o(m1, n1);
        }
  return gamma;
}

double objective_eval(const OrthogonalPoint& o, const ObjectiveSpec& spec) {
  return WindowObjective(spec).value(o.matrix());
}

Matrix euclidean_gradient(const OrthogonalPoint& o, const ObjectiveSpec& spec) {
  return WindowObjective(spec).gradient(o.matrix());
}

double hard_effective_nu1(const OrthogonalPoint& o, const TwoSiteTerm& term) {
  return effective_local_nu1(conjugate_onsite(term, o));
}

namespace {

constexpr double kReorthonormalizeDrift = 1e-10;
constexpr int kStallWindow = 50;
constexpr int kScanPoints = 16;

double spectral_norm(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.transpose() * a, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(solver.eigenvalues().maxCoeff(), 0.0));
}

Matrix move(const Matrix& o, const Matrix& direction, double mu) {
  Matrix next = expm_skew(-mu * direction) * o;
  if (orthogonality_defect(next) > kReorthonormalizeDrift) next = reorthonormalize(next);
  return next;
}

struct LineSearchResult {
  bool ok = false;
  double mu = 0.0;
  double angle = 0.0;
  double value = 0.0;
  Matrix point;
};

LineSearchResult line_search(const CgState& s, const Matrix& g, const Matrix& direction,
                             const WindowObjective& objective, const OptimizerConfig& config) {
  LineSearchResult out;
  const double slope = -0.5 * g.cwiseProduct(direction).sum();
  const double omega = spectral_norm(direction);
  if (!(slope < 0.0) || !(omega > 0.0)) return out;

  const double f0 = s.objective;
  const double c1 = config.line_search.sufficient_decrease;
  auto armijo = [&](double mu, double f) { return f <= f0 + c1 * mu * slope; };

  const double angle = s.last_angle > 0.0 ? std::min(2.0 * s.last_angle, std::numbers::pi / 2) : 0.1;
  const double mu1 = angle / omega;
  const double mu2 = 2.0 * mu1;
  const Matrix p1 = move(s.point, direction, mu1);
  const Matrix p2 = move(s.point, direction, mu2);
  const double f1 = objective.value(p1);
  const double f2 = objective.value(p2);

  struct Candidate {
    double mu, f;
    Matrix p;
  };
  std::vector<Candidate> candidates{{mu1, f1, p1}, {mu2, f2, p2}};

  // Quadratic through (0, f0), (mu1, f1), (mu2, f2).
  const double curvature = (f2 - 2.0 * f1 + f0) / (2.0 * mu1 * mu1);
  const double linear = (4.0 * f1 - f2 - 3.0 * f0) / (2.0 * mu1);
  double mu_fit = 0.5 * mu1;
  if (curvature > 0.0) mu_fit = std::clamp(-linear / (2.0 * curvature), mu1 / 64.0, 4.0 * mu1);
  if (mu_fit != mu1 && mu_fit != mu2) {
    Matrix pf = move(s.point, direction, mu_fit);
    const double ff = objective.value(pf);
    candidates.push_back({mu_fit, ff, std::move(pf)});
  }

  // Coarse scan along the geodesic up to half a turn of the fastest plane.
  for (int k = 1; k <= kScanPoints; ++k) {
    const double mu = (std::numbers::pi * k / kScanPoints) / omega;
    Matrix p = move(s.point, direction, mu);
    const double f = objective.value(p);
    candidates.push_back({mu, f, std::move(p)});
  }

  const Candidate* best = nullptr;
  for (const auto& c : candidates) {
    if (armijo(c.mu, c.f) && (best == nullptr || c.f < best->f)) best = &c;
  }
  if (best != nullptr) {
    out = {true, best->mu, best->mu * omega, best->f, best->p};
    return out;
  }

  double mu = std::min(mu_fit, mu1);
  for (int k = 0; k < config.line_search.max_halvings; ++k) {
    mu *= config.line_search.backtracking_factor;
    Matrix p = move(s.point, direction, mu);
    const double f = objective.value(p);
    if (armijo(mu, f)) {
      out = {true, mu, mu * omega, f, std::move(p)};
      return out;
    }
  }
  return out;
}

}  // namespace

CgState cg_initialize(const Matrix& o, const WindowObjective& objective) {
  CgState s;
  s.point = o;
  s.objective = objective.value(o);
  s.status = "running";
  return s;
}

CgState riemannian_step(const CgState& state, const Matrix& gamma, const WindowObjective& objective,
                        const OptimizerConfig& config) {
  CgState next = state;
  const int d = static_cast<int>(state.point.rows());
  if (gamma.rows() != d || gamma.cols() != d) throw InvalidArgument("riemannian_step: gradient shape mismatch");
  if (orthogonality_defect(state.point) > OrthogonalPoint::kTolerance) {
    throw InvalidArgument("riemannian_step: current point is not orthogonal");
  }

  const Matrix a = gamma * state.point.transpose();
  const Matrix g = a - a.transpose();
  next.gradient_norm = std::sqrt(0.5) * g.norm();
  if (next.gradient_norm <= config.gradient_tolerance * (1.0 + std::abs(state.objective))) {
    next.converged = true;
    next.status = "gradient tolerance reached";
    next.last_step = 0.0;
    return next;
  }

  const int period = config.restart_period > 0 ? config.restart_period : std::max(1, d * (d - 1) / 2);
  Matrix direction = g;
  bool steepest = true;
  if (state.direction.size() != 0 && state.since_restart + 1 < period) {
    const double previous = state.gradient.squaredNorm();
    const double beta = previous > 0.0 ? std::max(0.0, (g - state.gradient).cwiseProduct(g).sum() / previous) : 0.0;
    direction = g + beta * state.direction;
    steepest = beta == 0.0;
    if (g.cwiseProduct(direction).sum() <= 0.0) {
      direction = g;
      steepest = true;
    }
  }

  LineSearchResult ls = line_search(state, g, direction, objective, config);
  if (!ls.ok && !steepest) {
    direction = g;
    steepest = true;
    ls = line_search(state, g, direction, objective, config);
  }
  next.iteration = state.iteration + 1;
  next.gradient = g;
  next.direction = direction;
  if (!ls.ok) {
    next.converged = true;
    next.status = "line search failed along steepest descent";
    next.last_step = 0.0;
    return next;
  }
  if (ls.value > state.objective) throw std::logic_error("riemannian_step: accepted step increased the objective");
  next.point = std::move(ls.point);
  next.objective = ls.value;
  next.last_step = ls.mu;
  next.last_angle = ls.angle;
  next.since_restart = steepest ? 0 : state.since_restart + 1;
  return next;
}

BranchTrace minimize(const Matrix& init, const WindowObjective& objective, const OptimizerConfig& config,
                     std::string name) {
  config.validate();
  BranchTrace trace;
  trace.name = std::move(name);
  trace.hard_start = objective.hard_nu1(init);
  CgState s = cg_initialize(init, objective);
  int stalled = 0;
  while (!s.converged && s.iteration < config.max_iters) {
    const double before = s.objective;
    s = riemannian_step(s, objective.gradient(s.point), objective, config);
    trace.iterations.push_back({s.objective, s.gradient_norm, s.last_step});
    if (s.converged) break;
    stalled = before - s.objective <= 1e-15 * (1.0 + std::abs(before)) ? stalled + 1 : 0;
    if (stalled >= kStallWindow) {
      s.converged = true;
      s.status = "objective stalled";
    }
  }
  if (!s.converged) s.status = "max_iters reached";
  trace.converged = s.converged;
  trace.status = s.status;
  trace.final_point = s.point;
  trace.hard_end = objective.hard_nu1(s.point);
  return trace;
}

OrthogonalPoint initial_point(int d, const OptimizerConfig& config, std::uint64_t seed) {
  switch (config.init) {
    case InitKind::identity:
      return OrthogonalPoint::identity(d);
    case InitKind::perturbed_identity: {
      std::mt19937_64 rng(seed);
      std::normal_distribution<double> normal(0.0, 1.0);
      Matrix k = Matrix::Zero(d, d);
      for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
          k(i, j) = normal(rng);
          k(j, i) = -k(i, j);
        }
      return OrthogonalPoint(reorthonormalize(expm_skew(config.perturbation * k)));
    }
    case InitKind::haar_random:
      return haar_random_orthogonal(d, seed);
  }
  throw InvalidArgument("initial_point: unknown init kind");
}

namespace {

std::uint64_t restart_seed(std::uint64_t seed, int restart) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(restart + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return restart == 0 ? seed : z ^ (z >> 31);
}

}  // namespace

OptimizationResult optimize(const TwoSiteTerm& term, const OptimizerConfig& config) {
  config.validate();
  const int d = term.local_dim();
  const WindowObjective frobenius({ObjectiveKind::nu2_squared, config.alpha, term});
  const WindowObjective smooth({ObjectiveKind::smooth_nu1, config.alpha, term});

  OptimizerTrace trace;
  Matrix best_point;
  double best_hard = std::numeric_limits<double>::infinity();

  for (int r = 0; r < config.restarts; ++r) {
    const Matrix start = initial_point(d, config, restart_seed(config.seed, r)).matrix();
    const std::string tag = config.restarts > 1 ? "#" + std::to_string(r) : "";

    BranchTrace pre = minimize(start, frobenius, config, "a:nu2" + tag);
    BranchTrace a = minimize(pre.final_point, smooth, config, "a:smooth" + tag);
    BranchTrace b = minimize(start, smooth, config, "b:smooth" + tag);

    const double start_hard = smooth.hard_nu1(start);
    if (r == 0) trace.hard_start = start_hard;

    struct Candidate {
      const Matrix* point;
      double hard;
      std::string label;
    };
    const Candidate candidates[] = {{&a.final_point, a.hard_end, a.name},
                                    {&pre.final_point, pre.hard_end, pre.name},
                                    {&b.final_point, b.hard_end, b.name},
                                    {&start, start_hard, "start" + tag}};
    for (const auto& c : candidates) {
      if (c.hard < best_hard) {
        best_hard = c.hard;
        best_point = *c.point;
        trace.selected = c.label;
      }
    }
    for (BranchTrace* t : {&pre, &a, &b}) {
      trace.total_iterations += static_cast<int>(t->iterations.size());
      trace.branches.push_back(std::move(*t));
    }
  }
  // The computational basis competes too, so the result never does worse
  // than no rotation at all.
  const Matrix identity = Matrix::Identity(d, d);
  trace.hard_identity = smooth.hard_nu1(identity);
  if (trace.hard_identity < best_hard) {
    best_hard = trace.hard_identity;
    best_point = identity;
    trace.selected = "identity";
  }
  trace.hard_end = best_hard;
  for (const auto& branch : trace.branches) {
    if (branch.name.starts_with("a:smooth") || branch.name.starts_with("b:smooth")) {
      if (trace.hard_end > branch.hard_end) throw std::logic_error("optimize: hybrid dominance violated");
    }
  }
  return {OrthogonalPoint(reorthonormalize(best_point)), std::move(trace)};
}

}  // namespace stoqease
