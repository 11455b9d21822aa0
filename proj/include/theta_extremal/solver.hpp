#pragma once

#include "theta_extremal/measure.hpp"
#include "theta_extremal/moment_basis.hpp"
#include "theta_extremal/report.hpp"
#include "theta_extremal/sphere.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <utility>

namespace theta_extremal {

/// Settings for the penalty solver. Defaults follow the documented schedule
/// (penalty 10, growth 10, at most 12 outer rounds, residual 1e-8).
struct SolverConfig {
  int support_size = 8;
  int restarts = 20;
  int max_outer_iters = 12;
  int max_inner_iters = 500;
  double penalty_init = 10.0;
  double penalty_growth = 10.0;
  /// Initial trust parameter s of the regularized step (H + I/s) d = -g.
  double step_size = 1e-2;
  /// Inner loop stops once the relative objective decrease falls below this.
  double grad_tol = 1e-14;
  double residual_tol = 1e-8;
  std::uint64_t seed = 0;
  /// Worker threads for restarts; 0 reads THETA_EXTREMAL_THREADS, then
  /// falls back to the hardware concurrency.
  int threads = 0;

  /// Throws std::invalid_argument describing the first violated invariant.
  void validate() const;
};

/// Closed-form Theta(m, theta, n) where known: 2^{1-theta} (m = 1),
/// (n+2)^{1-theta} (m = 2), (2n+2)^{1-theta} (m = 3), (m+1)^{1-theta} (n = 1).
std::optional<double> closed_form_theta(int m, double theta, Dimension n);

/// Smallest support a measure satisfying the degree-m constraints can have
/// by the orthonormal-frame dimension count (m+1 on the circle, 2 for m = 1,
/// otherwise dim of polynomials of degree <= m/2 on S^n).
int minimal_support(Dimension n, int m);

struct OptimizerReport {
  explicit OptimizerReport(DiscreteMeasure measure) : best_measure(std::move(measure)) {}

  DiscreteMeasure best_measure;
  double energy = 0.0;
  double residual_norm = 0.0;
  std::optional<double> closed_form;
  std::optional<double> gap;
  int iterations = 0;
  bool converged = false;
  int restarts_converged = 0;
  int best_restart = -1;
};

/// Outcome of one penalty run from a given start.
struct RunResult {
  PointSet points;
  Eigen::VectorXd weights;
  double energy = 0.0;
  double residual_norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Single penalty run starting from (points, weights). Deterministic.
RunResult run_penalty_solver(const MomentBasis &basis, double theta,
                             PointSet points, Eigen::VectorXd weights,
                             const SolverConfig &config);

/// Random start for restart `index`: Gaussian points projected to the
/// sphere and flat-Dirichlet weights drawn from stream (seed, index).
DiscreteMeasure random_start(Dimension n, int support, std::uint64_t seed,
                             std::uint64_t index);

/// Best of `config.restarts` independent runs (upper bound on Theta).
/// Never reports an infeasible run as converged.
OptimizerReport minimize_theta(Dimension n, int m, double theta,
                               const SolverConfig &config);

Json report_to_json(const OptimizerReport &report);

/// Probability vector (nonnegative, sums to 1 within 1e-12).
class WeightVector {
public:
  explicit WeightVector(Eigen::VectorXd alphas);
  const Eigen::VectorXd &alphas() const { return alphas_; }

private:
  Eigen::VectorXd alphas_;
};

/// True iff unit vectors with these weights can sum to zero, i.e. no weight
/// exceeds the total of the others: 2 max_i alpha_i <= 1.
bool weight_feasibility_m1(const WeightVector &w);

/// Exhaustive minimum of sum alpha_i^theta over the grid simplex
/// {k / grid_steps} with at most `max_support` atoms, restricted to
/// m = 1 feasible weights. +infinity when the grid has no feasible point.
double bruteforce_theta_m1(double theta, int max_support, int grid_steps);

} // namespace theta_extremal
