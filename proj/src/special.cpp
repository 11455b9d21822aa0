#include "theta_extremal/special.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace theta_extremal {

namespace {

void require_positive(double alpha, const char *what) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw std::domain_error(std::string(what) +
                            ": argument must be a positive finite real, got " +
                            std::to_string(alpha));
  }
}

} // namespace

double gamma(double alpha) {
  require_positive(alpha, "gamma");
  return std::tgamma(alpha);
}

double log_gamma(double alpha) {
  require_positive(alpha, "log_gamma");
  return std::lgamma(alpha);
}

double beta(double a, double b) {
  require_positive(a, "beta");
  require_positive(b, "beta");
  if (a + b < 140.0) {
    return std::tgamma(a) * std::tgamma(b) / std::tgamma(a + b);
  }
  return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

double surface_area(int n) {
  if (n < 1) {
    throw std::domain_error("surface_area: sphere dimension must be >= 1, got " +
                            std::to_string(n));
  }
  const double half = 0.5 * static_cast<double>(n + 1);
  return 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
}

} // namespace theta_extremal
