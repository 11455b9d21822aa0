#include "theta_extremal/solver.hpp"

#include "theta_extremal/measure_io.hpp"
#include "theta_extremal/random.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace theta_extremal {

namespace {

constexpr double kWeightClamp = 1e-12;
constexpr double kPruneThreshold = 1e-10;
constexpr double kMinStep = 1e-14;
constexpr double kEnergyTie = 1e-12;

void require_theta(double theta) {
  if (!(theta > 0.0 && theta < 1.0)) {
    throw std::domain_error("theta must lie in (0, 1), got " + std::to_string(theta));
  }
}

double energy_of(const Eigen::VectorXd &w, double theta) {
  double e = 0.0;
  for (double x : w) {
    if (x > 0.0) {
      e += std::pow(x, theta);
    }
  }
  return e;
}

struct Problem {
  const MomentBasis &basis;
  double theta;

  double penalty_objective(const PointSet &x, const Eigen::VectorXd &w,
                           double mu) const {
    const Eigen::VectorXd r = moment_residual(x, w, basis);
    return energy_of(w, theta) + 0.5 * mu * r.squaredNorm();
  }
};

// Removes atoms whose weight is <= threshold and renormalizes.
void prune(PointSet &x, Eigen::VectorXd &w, double threshold) {
  Eigen::Index kept = 0;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    kept += w[i] > threshold ? 1 : 0;
  }
  if (kept == w.size() || kept == 0) {
    return;
  }
  PointSet nx(kept, x.cols());
  Eigen::VectorXd nw(kept);
  Eigen::Index out = 0;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (w[i] > threshold) {
      nx.row(out) = x.row(i);
      nw[out] = w[i];
      ++out;
    }
  }
  x = std::move(nx);
  w = nw / nw.sum();
}

int thread_count(const SolverConfig &config, int tasks) {
  int threads = config.threads;
  if (threads <= 0) {
    if (const char *env = std::getenv("THETA_EXTREMAL_THREADS")) {
      threads = std::atoi(env);
    }
  }
  if (threads <= 0) {
    threads = static_cast<int>(std::thread::hardware_concurrency());
  }
  return std::clamp(threads, 1, std::max(1, tasks));
}

bool lexicographically_less(const PointSet &a, const PointSet &b) {
  for (Eigen::Index i = 0; i < std::min(a.rows(), b.rows()); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (a(i, j) != b(i, j)) {
        return a(i, j) < b(i, j);
      }
    }
  }
  return a.rows() < b.rows();
}

} // namespace

void SolverConfig::validate() const {
  auto fail = [](const std::string &what) { throw std::invalid_argument(what); };
  if (support_size < 1) {
    fail("support size must be >= 1");
  }
  if (restarts < 1) {
    fail("restarts must be >= 1");
  }
  if (max_outer_iters < 1 || max_inner_iters < 1) {
    fail("iteration limits must be >= 1");
  }
  if (!(penalty_init > 0.0)) {
    fail("penalty_init must be positive");
  }
  if (!(penalty_growth > 1.0)) {
    fail("penalty_growth must exceed 1");
  }
  if (!(step_size > 0.0) || !(grad_tol > 0.0) || !(residual_tol > 0.0)) {
    fail("step size and tolerances must be positive");
  }
}

std::optional<double> closed_form_theta(int m, double theta, Dimension n) {
  require_theta(theta);
  if (m < 1) {
    throw std::invalid_argument("closed_form_theta: m must be >= 1");
  }
  const double e = 1.0 - theta;
  if (m == 1) {
    return std::pow(2.0, e);
  }
  if (n.value() == 1) {
    return std::pow(static_cast<double>(m + 1), e);
  }
  if (m == 2) {
    return std::pow(static_cast<double>(n.value() + 2), e);
  }
  if (m == 3) {
    return std::pow(static_cast<double>(2 * n.value() + 2), e);
  }
  return std::nullopt;
}

int minimal_support(Dimension n, int m) {
  if (m < 1) {
    throw std::invalid_argument("minimal_support: m must be >= 1");
  }
  if (n.value() == 1) {
    return m + 1;
  }
  if (m == 1) {
    return 2;
  }
  return mean_zero_space_dimension(n, m / 2) + 1;
}

RunResult run_penalty_solver(const MomentBasis &basis, double theta, PointSet x,
                             Eigen::VectorXd w, const SolverConfig &config) {
  require_theta(theta);
  config.validate();
  const int d = basis.dimension().ambient();
  if (x.cols() != d || x.rows() != w.size()) {
    throw std::invalid_argument("run_penalty_solver: start has wrong shape");
  }
  const Problem problem{basis, theta};
  const int rank = basis.rank();

  double mu = config.penalty_init;
  double s = config.step_size;
  int iterations = 0;
  double residual = std::numeric_limits<double>::infinity();

  for (int outer = 0; outer < config.max_outer_iters; ++outer) {
    for (int inner = 0; inner < config.max_inner_iters; ++inner) {
      ++iterations;
      prune(x, w, 0.0);
      const auto n_atoms = static_cast<int>(w.size());
      const int nvar = n_atoms + n_atoms * d;

      // Constraint Jacobian with respect to (weights, tangent point moves).
      const Eigen::MatrixXd values = basis.evaluate(x); // N x rank
      const Eigen::VectorXd r = values.transpose() * w;
      Eigen::MatrixXd jac(rank, nvar);
      jac.leftCols(n_atoms) = values.transpose();
      for (int i = 0; i < n_atoms; ++i) {
        const Eigen::VectorXd xi = x.row(i).transpose();
        const Eigen::MatrixXd proj =
            Eigen::MatrixXd::Identity(d, d) - xi * xi.transpose();
        jac.block(0, n_atoms + i * d, rank, d) = w[i] * basis.jacobian(xi) * proj;
      }

      Eigen::VectorXd grad = mu * jac.transpose() * r;
      for (int i = 0; i < n_atoms; ++i) {
        grad[i] += theta * std::pow(std::max(w[i], kWeightClamp), theta - 1.0);
      }
      const double f0 = energy_of(w, theta) + 0.5 * mu * r.squaredNorm();
      const Eigen::MatrixXd gauss_newton = mu * jac.transpose() * jac;

      s = std::min(4.0 * s, 1.0);
      bool accepted = false;
      bool hit_boundary = false;
      double f1 = f0;
      PointSet x_new;
      Eigen::VectorXd w_new;
      while (s >= kMinStep) {
        // (H + I/s) d + lambda a = -g,  a^T d = 0 with a = (1,..,1, 0,..,0).
        Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(nvar + 1, nvar + 1);
        kkt.topLeftCorner(nvar, nvar) = gauss_newton;
        kkt.topLeftCorner(nvar, nvar).diagonal().array() += 1.0 / s;
        kkt.block(nvar, 0, 1, n_atoms).setOnes();
        kkt.block(0, nvar, n_atoms, 1).setOnes();
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nvar + 1);
        rhs.head(nvar) = -grad;
        const Eigen::VectorXd step = kkt.partialPivLu().solve(rhs).head(nvar);

        // Ratio test: stop at the first weight that reaches zero.
        double alpha = 1.0;
        int blocking = -1;
        for (int i = 0; i < n_atoms; ++i) {
          if (w[i] + step[i] < 0.0 && -w[i] / step[i] < alpha) {
            alpha = -w[i] / step[i];
            blocking = i;
          }
        }
        w_new = w + alpha * step.head(n_atoms);
        if (blocking >= 0) {
          w_new[blocking] = 0.0;
        }
        w_new = w_new.cwiseMax(0.0);
        w_new /= w_new.sum();
        x_new = x;
        for (int i = 0; i < n_atoms; ++i) {
          x_new.row(i) += alpha * step.segment(n_atoms + i * d, d).transpose();
          x_new.row(i).normalize();
        }
        f1 = problem.penalty_objective(x_new, w_new, mu);
        if (f1 < f0) {
          accepted = true;
          hit_boundary = blocking >= 0;
          break;
        }
        s *= 0.5;
      }
      if (!accepted) {
        s = config.step_size;
        break;
      }
      x = std::move(x_new);
      w = std::move(w_new);
      if (f0 - f1 < config.grad_tol * f0 && !hit_boundary) {
        break;
      }
    }
    prune(x, w, kPruneThreshold);
    residual = moment_residual(x, w, basis).norm();
    if (residual < config.residual_tol) {
      break;
    }
    mu *= config.penalty_growth;
  }

  RunResult result;
  result.points = std::move(x);
  result.weights = std::move(w);
  result.energy = energy_of(result.weights, theta);
  result.residual_norm = residual;
  result.iterations = iterations;
  result.converged = residual < config.residual_tol;
  return result;
}

DiscreteMeasure random_start(Dimension n, int support, std::uint64_t seed,
                             std::uint64_t index) {
  Rng rng = Rng::stream(seed, index);
  PointSet x(support, n.ambient());
  for (int i = 0; i < support; ++i) {
    for (int j = 0; j < n.ambient(); ++j) {
      x(i, j) = rng.normal();
    }
    x.row(i).normalize();
  }
  Eigen::VectorXd w(support);
  for (int i = 0; i < support; ++i) {
    w[i] = rng.exponential();
  }
  w /= w.sum();
  return DiscreteMeasure::normalized(std::move(x), std::move(w), 1e-9);
}

OptimizerReport minimize_theta(Dimension n, int m, double theta,
                               const SolverConfig &config) {
  require_theta(theta);
  config.validate();
  const int needed = minimal_support(n, m);
  if (config.support_size < needed) {
    throw std::invalid_argument("support size " + std::to_string(config.support_size) +
                                " is below the minimal feasible support " +
                                std::to_string(needed) + " for m = " +
                                std::to_string(m) + " on S^" +
                                std::to_string(n.value()));
  }
  const MomentBasis basis = MomentBasis::build(n, m);

  std::vector<RunResult> runs(static_cast<std::size_t>(config.restarts));
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&]() {
    for (int r = next++; r < config.restarts; r = next++) {
      try {
        const DiscreteMeasure start = random_start(
            n, config.support_size, config.seed, static_cast<std::uint64_t>(r));
        runs[static_cast<std::size_t>(r)] = run_penalty_solver(
            basis, theta, start.points(), start.weights(), config);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) {
          failure = std::current_exception();
        }
      }
    }
  };
  const int threads = thread_count(config, config.restarts);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back(worker);
    }
  }
  if (failure) {
    std::rethrow_exception(failure);
  }

  // Merge each run, then pick the winner by (energy, support, point order).
  struct Candidate {
    int restart;
    DiscreteMeasure measure;
    double energy;
    double residual;
    bool converged;
  };
  std::vector<Candidate> candidates;
  int total_iterations = 0;
  for (int r = 0; r < config.restarts; ++r) {
    const RunResult &run = runs[static_cast<std::size_t>(r)];
    total_iterations += run.iterations;
    DiscreteMeasure measure = DiscreteMeasure::normalized(run.points, run.weights, 1e-9);
    try {
      measure = merge_close_points(measure, kDefaultMergeTolerance);
    } catch (const std::domain_error &) {
      // antipodal cluster: keep the unmerged support
    }
    const double residual = moment_residual(measure, basis).norm();
    candidates.push_back({r, measure, theta_energy(measure, theta), residual,
                          residual < config.residual_tol});
  }
  auto better = [](const Candidate &a, const Candidate &b) {
    if (a.converged != b.converged) {
      return a.converged;
    }
    if (!a.converged) {
      return a.residual < b.residual;
    }
    if (std::abs(a.energy - b.energy) > kEnergyTie) {
      return a.energy < b.energy;
    }
    if (a.measure.size() != b.measure.size()) {
      return a.measure.size() < b.measure.size();
    }
    return lexicographically_less(a.measure.points(), b.measure.points());
  };
  const Candidate *best = &candidates.front();
  int converged_count = 0;
  for (const auto &c : candidates) {
    converged_count += c.converged ? 1 : 0;
    if (better(c, *best)) {
      best = &c;
    }
  }

  OptimizerReport report(best->measure);
  report.energy = best->energy;
  report.residual_norm = best->residual;
  report.closed_form = closed_form_theta(m, theta, n);
  if (report.closed_form) {
    report.gap = report.energy - *report.closed_form;
  }
  report.iterations = total_iterations;
  report.converged = best->converged;
  report.restarts_converged = converged_count;
  report.best_restart = best->restart;
  return report;
}

Json report_to_json(const OptimizerReport &report) {
  Json doc;
  doc["energy"] = report.energy;
  doc["residual_norm"] = report.residual_norm;
  doc["closed_form"] = report.closed_form ? Json(*report.closed_form) : Json(nullptr);
  doc["gap"] = report.gap ? Json(*report.gap) : Json(nullptr);
  doc["conjectural"] = !report.closed_form.has_value();
  doc["converged"] = report.converged;
  doc["iterations"] = report.iterations;
  doc["restarts_converged"] = report.restarts_converged;
  doc["best_restart"] = report.best_restart;
  doc["support_size"] = report.best_measure.size();
  doc["best_measure"] = measure_to_json(report.best_measure);
  return doc;
}

WeightVector::WeightVector(Eigen::VectorXd alphas) : alphas_(std::move(alphas)) {
  if (alphas_.size() == 0) {
    throw std::invalid_argument("WeightVector: empty");
  }
  if ((alphas_.array() < 0.0).any()) {
    throw std::invalid_argument("WeightVector: negative entry");
  }
  if (std::abs(alphas_.sum() - 1.0) > 1e-12) {
    throw std::invalid_argument("WeightVector: entries must sum to 1");
  }
}

bool weight_feasibility_m1(const WeightVector &w) {
  return 2.0 * w.alphas().maxCoeff() <= 1.0 + 1e-12;
}

double bruteforce_theta_m1(double theta, int max_support, int grid_steps) {
  require_theta(theta);
  if (max_support < 1 || max_support > 5) {
    throw std::invalid_argument("bruteforce_theta_m1: max_support must be in [1, 5]");
  }
  if (grid_steps < 1 || grid_steps > 200) {
    throw std::invalid_argument("bruteforce_theta_m1: grid_steps must be in [1, 200]");
  }
  std::vector<double> power(static_cast<std::size_t>(grid_steps) + 1);
  for (int k = 0; k <= grid_steps; ++k) {
    power[static_cast<std::size_t>(k)] =
        std::pow(static_cast<double>(k) / grid_steps, theta);
  }
  double best = std::numeric_limits<double>::infinity();
  // Non-increasing integer partitions of grid_steps with <= max_support parts;
  // the energy is symmetric so ordered compositions add nothing.
  std::vector<int> parts;
  auto recurse = [&](auto &&self, int remaining, int cap, double energy) -> void {
    if (remaining == 0) {
      // Feasible iff the largest part is at most half the total.
      if (!parts.empty() && 2 * parts.front() <= grid_steps) {
        best = std::min(best, energy);
      }
      return;
    }
    if (static_cast<int>(parts.size()) == max_support) {
      return;
    }
    for (int p = std::min(cap, remaining); p >= 1; --p) {
      if (2 * p > grid_steps) {
        continue;
      }
      parts.push_back(p);
      self(self, remaining - p, p, energy + power[static_cast<std::size_t>(p)]);
      parts.pop_back();
    }
  };
  recurse(recurse, grid_steps, grid_steps, 0.0);
  return best;
}

} // namespace theta_extremal
