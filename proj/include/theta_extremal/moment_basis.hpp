#pragma once

#include "theta_extremal/sphere.hpp"

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace theta_extremal {

using MultiIndex = std::vector<int>;

/// Average of x^a over S^n with respect to the normalized surface measure.
/// Zero when any exponent is odd; otherwise
///   2 prod Gamma((a_i+1)/2) / Gamma(sum (a_i+1)/2) / |S^n|,
/// evaluated in the equivalent exact form prod (a_i-1)!! / prod_{k<|a|/2} (n+1+2k).
double monomial_sphere_average(Dimension n, std::span<const int> exponents);

/// Monomials of total degree 1..m in d variables, graded lexicographic
/// (by degree, then lexicographically descending exponent vectors).
std::vector<MultiIndex> graded_monomials(int variables, int max_degree);

/// Dimension of the mean-zero polynomials of degree <= m restricted to S^n:
/// C(m+n, n) + C(m+n-1, n) - 1.
int mean_zero_space_dimension(Dimension n, int m);

/// Orthonormal basis (in L^2 of the normalized measure) of mean-zero
/// polynomials of degree <= m restricted to S^n. Immutable once built.
class MomentBasis {
public:
  static constexpr double kEigenCutoff = 1e-10;

  static MomentBasis build(Dimension n, int m);

  Dimension dimension() const { return n_; }
  int degree() const { return m_; }
  int rank() const { return static_cast<int>(coefficients_.rows()); }
  const std::vector<MultiIndex> &monomials() const { return monomials_; }
  const Eigen::VectorXd &monomial_averages() const { return averages_; }
  /// rank x (#monomials); row k holds f_k in the centered monomial basis.
  const Eigen::MatrixXd &coefficients() const { return coefficients_; }

  /// f_1(x), ..., f_rank(x).
  Eigen::VectorXd evaluate(const Eigen::VectorXd &x) const;
  /// Row i = basis values at point i.
  Eigen::MatrixXd evaluate(const PointSet &points) const;
  /// Ambient gradient: rank x (n+1), entry (k, j) = d f_k / d x_j.
  Eigen::MatrixXd jacobian(const Eigen::VectorXd &x) const;

private:
  MomentBasis(Dimension n, int m) : n_(n), m_(m) {}

  Eigen::VectorXd centered_monomials(const Eigen::VectorXd &x) const;

  Dimension n_;
  int m_;
  std::vector<MultiIndex> monomials_;
  Eigen::VectorXd averages_;
  Eigen::MatrixXd coefficients_;
};

/// Constraint vector r_k = sum_i w_i f_k(x_i) for a weighted point set.
Eigen::VectorXd moment_residual(const PointSet &points,
                                const Eigen::VectorXd &weights,
                                const MomentBasis &basis);

} // namespace theta_extremal
