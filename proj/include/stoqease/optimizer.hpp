#pragma once

#include "stoqease/dense_operator.hpp"
#include "stoqease/hamiltonian.hpp"
#include "stoqease/measures.hpp"
#include "stoqease/orthogonal.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace stoqease {

enum class ObjectiveKind { nu2_squared, smooth_nu1 };

/// Objective over the effective window of h(O) = (O (x) O) h (O^T (x) O^T).
struct ObjectiveSpec {
  ObjectiveKind measure;
  double alpha;  ///< softplus sharpness, used by smooth_nu1 only
  TwoSiteTerm term;

  void validate() const;
};

/// Evaluates a window objective and its Euclidean gradient in O. Holds the
/// index tables so that repeated evaluations during a line search are cheap.
class WindowObjective {
 public:
  explicit WindowObjective(ObjectiveSpec spec);

  const ObjectiveSpec& spec() const noexcept { return spec_; }
  int local_dim() const noexcept { return spec_.term.local_dim(); }

  double value(const Matrix& o) const;
  /// Gamma with Gamma(k, l) = d objective / d O(k, l).
  Matrix gradient(const Matrix& o) const;
  /// Sum of positive window entries of h(O), the hard target.
  double hard_nu1(const Matrix& o) const;

 private:
  Matrix conjugated(const Matrix& o) const;

  ObjectiveSpec spec_;
  EffectiveWindow window_;
};

double objective_eval(const OrthogonalPoint& o, const ObjectiveSpec& spec);
Matrix euclidean_gradient(const OrthogonalPoint& o, const ObjectiveSpec& spec);
/// effective_local_nu1 of h(O).
double hard_effective_nu1(const OrthogonalPoint& o, const TwoSiteTerm& term);

enum class InitKind { identity, perturbed_identity, haar_random };

struct LineSearchConfig {
  double backtracking_factor = 0.5;
  double sufficient_decrease = 1e-4;
  int max_halvings = 40;
};

struct OptimizerConfig {
  int max_iters = 5000;
  double gradient_tolerance = 1e-8;
  LineSearchConfig line_search;
  int restart_period = 0;  ///< 0 selects d(d-1)/2
  InitKind init = InitKind::haar_random;
  double perturbation = 0.01;
  std::uint64_t seed = 0;
  double alpha = 50.0;  ///< smooth-nu1 sharpness
  int restarts = 1;     ///< independent initial points, best one kept

  void validate() const;
};

/// Conjugate-gradient iterate on O(d). Gradients and directions live in
/// the Lie algebra (skew-symmetric d x d) and act by O <- exp(-mu H) O.
struct CgState {
  Matrix point;
  double objective = 0.0;
  Matrix gradient;   ///< Riemannian gradient at the previous point
  Matrix direction;  ///< last search direction
  double last_angle = 0.0;
  double last_step = 0.0;
  double gradient_norm = 0.0;
  int iteration = 0;
  int since_restart = 0;
  bool converged = false;
  std::string status;
};

CgState cg_initialize(const Matrix& o, const WindowObjective& objective);

/// One Polak-Ribiere+ step with Armijo backtracking. Gamma is the Euclidean
/// gradient at state.point. A zero Gamma leaves the point unchanged and
/// flags convergence.
CgState riemannian_step(const CgState& state, const Matrix& gamma, const WindowObjective& objective,
                        const OptimizerConfig& config);

struct IterationRecord {
  double objective;
  double gradient_norm;
  double step;
};

struct BranchTrace {
  std::string name;
  std::vector<IterationRecord> iterations;
  double hard_start = 0.0;
  double hard_end = 0.0;
  bool converged = false;
  std::string status;
  Matrix final_point;
};

/// Runs CG from `init` until convergence or max_iters.
BranchTrace minimize(const Matrix& init, const WindowObjective& objective, const OptimizerConfig& config,
                     std::string name = "cg");

struct OptimizerTrace {
  std::vector<BranchTrace> branches;
  std::string selected;
  double hard_start = 0.0;  ///< hard nu1 at the first initial point
  double hard_identity = 0.0;  ///< hard nu1 in the computational basis
  double hard_end = 0.0;
  int total_iterations = 0;
};

struct OptimizationResult {
  OrthogonalPoint point;
  OptimizerTrace trace;
};

OrthogonalPoint initial_point(int d, const OptimizerConfig& config, std::uint64_t seed);

/// Hybrid schedule: (a) nu2^2 pre-optimisation followed by smooth nu1, and
/// (b) smooth nu1 straight from the initial point. Every point produced
/// (initial, pre-optimised, both finals) competes on hard nu1, and so does
/// the identity; ties keep the earlier candidate, with branch (a) first.
OptimizationResult optimize(const TwoSiteTerm& term, const OptimizerConfig& config);

}  // namespace stoqease
