#pragma once

#include "theta_extremal/moment_basis.hpp"
#include "theta_extremal/sphere.hpp"

#include <Eigen/Dense>

#include <string>

namespace theta_extremal {

/// Finitely supported probability measure on S^n. Immutable; zero-weight
/// atoms are dropped on construction.
class DiscreteMeasure {
public:
  static constexpr double kWeightSumTolerance = 1e-12;

  /// Throws std::invalid_argument if a weight is negative, the weights do
  /// not sum to 1 within 1e-12, or a point is not unit norm within 1e-12.
  DiscreteMeasure(PointSet points, Eigen::VectorXd weights);

  /// Uniform weights 1/N on the given points.
  static DiscreteMeasure uniform(PointSet points);

  /// Renormalizes points and weights first; rejects inputs that are off by
  /// more than `tolerance` (used for hand-written measure files).
  static DiscreteMeasure normalized(PointSet points, Eigen::VectorXd weights,
                                    double tolerance = 1e-6);

  Dimension dimension() const { return Dimension(static_cast<int>(points_.cols()) - 1); }
  int size() const { return static_cast<int>(weights_.size()); }
  const PointSet &points() const { return points_; }
  const Eigen::VectorXd &weights() const { return weights_; }

  /// Applies x -> x Q to every atom (Q orthogonal, (n+1) x (n+1)).
  DiscreteMeasure transformed(const Eigen::MatrixXd &q) const;

private:
  PointSet points_;
  Eigen::VectorXd weights_;
};

/// sum_i nu_i^theta over atoms with positive weight; theta in (0, 1).
double theta_energy(const DiscreteMeasure &measure, double theta);

Eigen::VectorXd moment_residual(const DiscreteMeasure &measure,
                                const MomentBasis &basis);

struct Feasibility {
  bool feasible = false;
  double residual_norm = 0.0;
};

/// Feasible iff the moment residual of degree <= m has norm below tol.
Feasibility is_feasible(const DiscreteMeasure &measure, int m, double tol);
Feasibility is_feasible(const DiscreteMeasure &measure, const MomentBasis &basis,
                        double tol);

inline constexpr double kDefaultMergeTolerance = 1e-6;

/// Replaces clusters of atoms within geodesic distance `dist_tol` (single
/// linkage) by their normalized weighted mean carrying the summed weight.
/// Throws std::domain_error when a cluster's weighted mean vanishes.
DiscreteMeasure merge_close_points(const DiscreteMeasure &measure,
                                   double dist_tol = kDefaultMergeTolerance);

/// Frame u_0 = (sqrt(nu_i)), u_a = (sqrt((n+1) nu_i) xi_{i,a}), a = 1..n+1,
/// stored as the columns of an N x (n+2) matrix.
struct GramFrame {
  Eigen::MatrixXd vectors;
};

GramFrame build_gram_frame(const DiscreteMeasure &measure);

struct GramCertificate {
  double max_orthonormality_deviation = 0.0;
  /// sum_a <e_i, u_a>^2, which equals (n+2) nu_i.
  Eigen::VectorXd parseval_sums;
  /// (n+2)^{1-theta}.
  double nominal_lower_bound = 0.0;
  /// Rigorous bound (n+2)^{1-theta} (1 + (n+2) dev)^{theta-1}; it follows
  /// from lambda_max(U^T U) <= 1 + (n+2) dev and s^theta >= s s_max^{theta-1}.
  double certified_lower_bound = 0.0;
  double slack = 0.0;
  bool applicable = false;
  std::string reason;
};

/// Orthonormality certificate for degree-2 moment constraints.
GramCertificate gram_certificate_m2(const DiscreteMeasure &measure, double theta,
                                    double tolerance = 1e-6);

struct CircleCertificate {
  /// max |<u_k, u_l> - delta_kl| over the m+1 complex vectors.
  double max_unitarity_deviation = 0.0;
  Eigen::VectorXd parseval_sums;
  double nominal_lower_bound = 0.0;
  double certified_lower_bound = 0.0;
  bool applicable = false;
  std::string reason;
};

/// Unitarity certificate on S^1: u_k = (sqrt(nu_j) z_j^k), k = 0..m.
CircleCertificate circle_certificate(const DiscreteMeasure &measure, int m,
                                     double theta, double tolerance = 1e-6);

} // namespace theta_extremal
