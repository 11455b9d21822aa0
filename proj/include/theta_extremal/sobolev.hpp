#pragma once

#include "theta_extremal/sphere.hpp"

#include <string>

namespace theta_extremal {

/// Exponent data for the W^{1,p} embedding on S^n.
class SobolevParams {
public:
  /// Throws std::domain_error unless 1 < p < n.
  SobolevParams(Dimension n, double p);

  Dimension n() const { return n_; }
  double p() const { return p_; }
  /// Conjugate exponent p / (p - 1).
  double p_prime() const { return p_prime_; }
  /// Critical exponent p n / (n - p).
  double p_star() const { return p_star_; }
  /// (n - p) / n, which equals p / p*.
  double theta() const { return theta_; }

private:
  Dimension n_;
  double p_;
  double p_prime_;
  double p_star_;
  double theta_;
};

/// Sharp constant S_{n,p} of ||u||_{p*} <= S ||grad u||_p on R^n.
double sharp_sobolev(const SobolevParams &params);

/// The classical p = 2 form 4 / (n (n - 2)) |S^n|^{-2/n}, squared constant.
/// Needs n >= 3.
double sharp_sobolev_p2_squared(Dimension n);

/// Sharp constant for the second-order embedding, n >= 5.
double sharp_biharmonic(Dimension n);

/// S_{n,p}^p / Theta(m, (n-p)/n, n). Throws std::invalid_argument when Theta
/// has no closed form for (m, n); the solver gives a conjectural value then.
double improved_constant(const SobolevParams &params, int m);

/// Definition text for the odd-order constant. Only echoed, never evaluated.
std::string odd_order_constant_definition();

} // namespace theta_extremal
