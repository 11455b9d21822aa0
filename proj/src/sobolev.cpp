#include "theta_extremal/sobolev.hpp"

#include "theta_extremal/solver.hpp"
#include "theta_extremal/special.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace theta_extremal {

SobolevParams::SobolevParams(Dimension n, double p) : n_(n), p_(p) {
  const double nd = n.value();
  if (!(p > 1.0) || !(p < nd)) {
    throw std::domain_error("Sobolev exponent must satisfy 1 < p < n, got p = " +
                            std::to_string(p) + ", n = " + std::to_string(n.value()));
  }
  p_prime_ = p / (p - 1.0);
  p_star_ = p * nd / (nd - p);
  theta_ = (nd - p) / nd;
}

double sharp_sobolev(const SobolevParams &params) {
  const double n = params.n().value();
  const double p = params.p();
  const double lead = std::pow(n * (p - 1.0) / (n - p), 1.0 - 1.0 / p) / n;
  // n! through Gamma keeps a single code path.
  // n! through Gamma keeps a single code path. p < n forces n >= 2.
  const double ratio =
      gamma(n + 1.0) / (gamma(n / p) * gamma(n + 1.0 - n / p) *
                        surface_area(params.n().value() - 1));
  return lead * std::pow(ratio, 1.0 / n);
}

double sharp_sobolev_p2_squared(Dimension n) {
  if (n.value() < 3) {
    throw std::domain_error("p = 2 form needs n >= 3");
  }
  const double nd = n.value();
  return 4.0 / (nd * (nd - 2.0)) * std::pow(surface_area(n.value()), -2.0 / nd);
}

double sharp_biharmonic(Dimension n) {
  if (n.value() <= 4) {
    throw std::domain_error("sharp_biharmonic: needs n >= 5, got " +
                            std::to_string(n.value()));
  }
  const double nd = n.value();
  return 4.0 / std::sqrt(nd * (nd + 2.0) * (nd - 2.0) * (nd - 4.0)) *
         std::pow(surface_area(n.value()), -2.0 / nd);
}

double improved_constant(const SobolevParams &params, int m) {
  const auto theta_value = closed_form_theta(m, params.theta(), params.n());
  if (!theta_value) {
    throw std::invalid_argument(
        "no closed form for Theta(m = " + std::to_string(m) +
        ", n = " + std::to_string(params.n().value()) +
        "); run `theta solve` for a conjectural upper bound");
  }
  return std::pow(sharp_sobolev(params), params.p()) / *theta_value;
}

std::string odd_order_constant_definition() {
  return "S_{n,s,p}: best constant in ||u||_{np/(n-sp)} <= S ||grad (-Laplace)^{(s-1)/2} u||_p "
         "on R^n, s odd, sp < n; no closed form, not evaluated";
}

} // namespace theta_extremal
