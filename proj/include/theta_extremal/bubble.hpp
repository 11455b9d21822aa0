#pragma once

#include "theta_extremal/moment_basis.hpp"
#include "theta_extremal/quadrature.hpp"
#include "theta_extremal/sobolev.hpp"
#include "theta_extremal/sphere.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace theta_extremal {

/// Truncated bubbles (eps + t^{p'})^{-n/p*} of radius 2 delta placed at the
/// given centers (normally the n+2 simplex vertices).
class BubbleProfile {
public:
  /// Throws std::invalid_argument unless 0 < eps < delta, 0 < tau < tau_bound
  /// and the caps of radius 2 delta around the centers are disjoint.
  BubbleProfile(SobolevParams params, double eps, double delta, double tau,
                PointSet centers);

  /// min{n/p, 2/p', p*/p'}; tau must stay strictly below it.
  static double tau_bound(const SobolevParams &params);
  /// 0.9 * tau_bound.
  static double default_tau(const SobolevParams &params);

  const SobolevParams &params() const { return params_; }
  double eps() const { return eps_; }
  double delta() const { return delta_; }
  double tau() const { return tau_; }
  const PointSet &centers() const { return centers_; }

  /// Radial profile phi_eps(t); zero beyond 2 delta.
  double phi(double t) const;
  /// d phi / dt away from the kinks at delta and 2 delta.
  double dphi(double t) const;
  /// Bubble width eps^{1/p'}.
  double scale() const;
  /// eps^{-n/p + tau}, the size of the moment defect and of the floor.
  double floor_scale() const;
  /// v(x): phi of the distance to the nearest center.
  double v(const Eigen::VectorXd &x) const;

private:
  SobolevParams params_;
  double eps_;
  double delta_;
  double tau_;
  PointSet centers_;
};

struct LeadingCoefficients {
  /// Coefficient of eps^{-n/p} in int v^{p*}.
  double c_num = 0.0;
  /// Coefficient of eps^{-n/p*} in int |grad v|^p.
  double c_grad = 0.0;
  /// c_num^{p/p*} / c_grad.
  double limit_ratio = 0.0;
};

LeadingCoefficients leading_coefficients(const SobolevParams &params);

/// (n+2)^{-p/n} S_{n,p}^p, the value the Rayleigh quotients approach.
double rayleigh_target(const SobolevParams &params);

/// |limit ratio through the Beta route - (n+2)^{-p/n} S_{n,p}^p|.
double identity_discrepancy(const SobolevParams &params);

struct BubbleOptions {
  double delta = 0.3;
  std::optional<double> tau;
  /// Radius of the correction bump eta.
  double bump_radius = 0.25;
  RadialRuleOptions radial{16, 3, 4};
  /// Rule on the tangent sphere S^{n-1} used by every polar rule.
  int angular_polar_nodes = 8;
  int angular_azimuth_nodes = 16;
  /// Bump radial rule: panels x nodes on [0, bump_radius].
  int bump_panels = 8;
  int bump_nodes_per_panel = 12;
  /// Global rule: product Gauss for n = 2, Monte Carlo for n >= 3.
  int global_polar_nodes = 400;
  int global_azimuth_nodes = 512;
  int monte_carlo_nodes = 1000000;
  std::uint64_t seed = 0;
  /// Rotate the simplex centers by a seeded Haar rotation when set.
  std::optional<std::uint64_t> rotation_seed;
  /// Largest tolerated condition number of the correction system.
  double max_condition = 1e8;
};

/// Integrals of the uncorrected v.
struct BubbleIntegrals {
  double I_pstar = 0.0;
  double I_p = 0.0;
  double I_grad = 0.0;
  /// [int v^{p*} f_k] over the orthonormal degree-2 basis.
  Eigen::VectorXd moment_vec;
};

/// Cap integrals by 1-D radial quadrature; moments by per-cap polar rules.
/// Throws std::invalid_argument when the radial rule has fewer than 200 nodes.
BubbleIntegrals integrate_bubble(const BubbleProfile &profile, const MomentBasis &basis,
                                 const BubbleOptions &options = {});

/// [int v^{p*} f_k] by a global rule; used as a cross-check.
Eigen::VectorXd global_moment_vector(const BubbleProfile &profile, const MomentBasis &basis,
                                     const QuadratureRule &rule);

/// The global rule used for pointwise checks (see BubbleOptions).
QuadratureRule global_rule(Dimension n, const BubbleOptions &options);

/// eta(x) = exp(1 - 1 / (1 - (d(x, c) / radius)^2)) inside the radius.
struct Bump {
  Eigen::VectorXd center;
  double radius = 0.25;

  double value(const Eigen::VectorXd &x) const;
  /// Tangential gradient on the sphere.
  Eigen::VectorXd gradient(const Eigen::VectorXd &x) const;
};

/// Bump centered at the antipode of a center that is farthest from all caps.
/// Throws std::invalid_argument if its support would meet a cap.
Bump place_bump(const BubbleProfile &profile, double radius);

struct CorrectionSystem {
  Bump bump;
  /// gram(k, j) = int eta^2 f_j f_k.
  Eigen::MatrixXd gram;
  Eigen::VectorXd beta;
  double condition_number = 0.0;
  double floor_scale = 0.0;
  /// c_1, the smallest power of two making the floor hold on all nodes.
  double floor_multiplier = 1.0;

  double floor_constant() const { return floor_multiplier * floor_scale; }
};

/// Integrals of the corrected u, with u^{p*} = v^{p*} + sum beta_j eta^2 f_j + c_1 eps^{-n/p+tau}.
struct CorrectedIntegrals {
  double I_pstar = 0.0;
  double I_p = 0.0;
  double I_grad = 0.0;
  Eigen::VectorXd moment_vec;
  /// |moment_vec| / I_pstar: moment residual of the probability u^{p*} / int u^{p*}.
  double moment_residual = 0.0;
  /// min over check nodes of u^{p*} / eps^{-n/p+tau}; at least 1.
  double min_floor_ratio = 0.0;
};

class CorrectedTestFunction {
public:
  /// Solves the correction system and integrates u. Throws std::runtime_error
  /// when the system is singular or its condition number exceeds the limit.
  CorrectedTestFunction(const BubbleProfile &profile, const MomentBasis &basis,
                        const BubbleIntegrals &raw, const BubbleOptions &options,
                        const QuadratureRule &check_rule);

  const CorrectionSystem &system() const { return system_; }
  const CorrectedIntegrals &integrals() const { return integrals_; }
  /// u^{p*}(x).
  double u_pstar(const Eigen::VectorXd &x) const;

private:
  BubbleProfile profile_;
  MomentBasis basis_;
  CorrectionSystem system_;
  CorrectedIntegrals integrals_;
};

struct SweepRow {
  double eps = 0.0;
  // Corrected u (the CSV columns).
  double I_pstar = 0.0;
  double I_p = 0.0;
  double I_grad = 0.0;
  double moment_residual = 0.0;
  double R = 0.0;
  double target = 0.0;
  double rel_err = 0.0;
  // Uncorrected v.
  double raw_I_pstar = 0.0;
  double raw_I_p = 0.0;
  double raw_I_grad = 0.0;
  double raw_moment_norm = 0.0;
  double raw_moment_residual = 0.0;
  double raw_R = 0.0;
  double raw_rel_err = 0.0;
  /// raw I_pstar / (c_num eps^{-n/p}).
  double leading_ratio = 0.0;
  double beta_max = 0.0;
  double floor_multiplier = 0.0;
  double min_floor_ratio = 0.0;
  double condition_number = 0.0;
};

struct SweepResult {
  double tau = 0.0;
  double delta = 0.0;
  double bump_radius = 0.0;
  Eigen::VectorXd bump_center;
  std::string global_rule_kind;
  Eigen::Index global_rule_nodes = 0;
  std::vector<SweepRow> rows;
};

/// One row per eps (strictly descending, inside (0, delta)).
SweepResult rayleigh_sweep(const SobolevParams &params, const std::vector<double> &eps_list,
                           const BubbleOptions &options = {});

/// Header eps,I_pstar,I_p,I_grad,moment_residual,R,target,rel_err; 17 digits.
std::string sweep_to_csv(const std::vector<SweepRow> &rows);

} // namespace theta_extremal
