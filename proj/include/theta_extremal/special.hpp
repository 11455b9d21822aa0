#pragma once

namespace theta_extremal {

/// Gamma function for alpha > 0 (std::tgamma with a domain check).
/// Throws std::domain_error for alpha <= 0 or non-finite input.
double gamma(double alpha);

/// log Gamma(alpha) for alpha > 0; used where Gamma itself would overflow.
double log_gamma(double alpha);

/// Euler Beta function B(a, b) = Gamma(a) Gamma(b) / Gamma(a + b).
double beta(double a, double b);

/// Area of the unit sphere S^n in R^{n+1}: 2 pi^{(n+1)/2} / Gamma((n+1)/2).
double surface_area(int n);

} // namespace theta_extremal
