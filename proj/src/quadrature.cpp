#include "theta_extremal/quadrature.hpp"

#include "theta_extremal/random.hpp"
#include "theta_extremal/special.hpp"

#include <gsl/gsl_integration.h>

#include <cmath>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <string>

namespace theta_extremal {

std::string_view to_string(RuleKind kind) {
  switch (kind) {
  case RuleKind::product_gauss:
    return "product_gauss";
  case RuleKind::monte_carlo:
    return "monte_carlo";
  case RuleKind::radial_1d:
    return "radial_1d";
  }
  return "unknown";
}

QuadratureRule gauss_legendre(double a, double b, int k) {
  return composite_gauss({a, b}, k);
}

QuadratureRule composite_gauss(const std::vector<double> &breakpoints, int k) {
  if (k < 1) {
    throw std::invalid_argument("Gauss-Legendre rule needs at least one node");
  }
  if (breakpoints.size() < 2) {
    throw std::invalid_argument("composite rule needs at least two breakpoints");
  }
  for (std::size_t i = 1; i < breakpoints.size(); ++i) {
    if (!(breakpoints[i] > breakpoints[i - 1])) {
      throw std::invalid_argument("breakpoints must be strictly increasing");
    }
  }
  std::unique_ptr<gsl_integration_glfixed_table,
                  decltype(&gsl_integration_glfixed_table_free)>
      table(gsl_integration_glfixed_table_alloc(static_cast<std::size_t>(k)),
            &gsl_integration_glfixed_table_free);
  if (!table) {
    throw std::runtime_error("cannot allocate Gauss-Legendre table");
  }
  const auto panels = static_cast<Eigen::Index>(breakpoints.size() - 1);
  QuadratureRule rule;
  rule.kind = RuleKind::radial_1d;
  rule.nodes.resize(panels * k, 1);
  rule.weights.resize(panels * k);
  Eigen::Index out = 0;
  for (Eigen::Index p = 0; p < panels; ++p) {
    for (int i = 0; i < k; ++i) {
      double x = 0.0;
      double w = 0.0;
      gsl_integration_glfixed_point(breakpoints[static_cast<std::size_t>(p)],
                                    breakpoints[static_cast<std::size_t>(p) + 1],
                                    static_cast<std::size_t>(i), &x, &w, table.get());
      rule.nodes(out, 0) = x;
      rule.weights[out] = w;
      ++out;
    }
  }
  return rule;
}

QuadratureRule radial_rule(double scale, double delta, const RadialRuleOptions &options) {
  if (!(scale > 0.0) || !(delta > 0.0)) {
    throw std::invalid_argument("radial rule needs positive scale and delta");
  }
  if (options.nodes_per_panel < 1 || options.panels_per_decade < 1 ||
      options.decades_below < 0) {
    throw std::invalid_argument("invalid radial rule options");
  }
  std::vector<double> breaks{0.0};
  const double start = scale * std::pow(10.0, -options.decades_below);
  if (start < delta) {
    const double decades = std::log10(delta / start);
    const int panels =
        std::max(1, static_cast<int>(std::ceil(decades * options.panels_per_decade)));
    for (int i = 0; i < panels; ++i) {
      breaks.push_back(start * std::pow(delta / start, static_cast<double>(i) / panels));
    }
  }
  breaks.push_back(delta);
  breaks.push_back(2.0 * delta);
  return composite_gauss(breaks, options.nodes_per_panel);
}

QuadratureRule sphere_product_rule(int k, int polar_nodes, int azimuth_nodes) {
  if (k < 1 || polar_nodes < 1 || azimuth_nodes < 1) {
    throw std::invalid_argument("sphere_product_rule: invalid sizes");
  }
  QuadratureRule rule;
  rule.kind = RuleKind::product_gauss;
  if (k == 1) {
    rule.nodes.resize(azimuth_nodes, 2);
    rule.weights.setConstant(azimuth_nodes, 2.0 * std::numbers::pi / azimuth_nodes);
    for (int j = 0; j < azimuth_nodes; ++j) {
      const double a = 2.0 * std::numbers::pi * j / azimuth_nodes;
      rule.nodes(j, 0) = std::cos(a);
      rule.nodes(j, 1) = std::sin(a);
    }
    return rule;
  }
  // x = (cos t, sin t * y), y on S^{k-1}, dmu = sin^{k-1} t dt dmu_{k-1}.
  const QuadratureRule lower = sphere_product_rule(k - 1, polar_nodes, azimuth_nodes);
  QuadratureRule polar;
  if (k == 2) {
    // Uniform in z = cos t: plain Gauss-Legendre on [-1, 1] is exact there.
    polar = gauss_legendre(-1.0, 1.0, polar_nodes);
    for (Eigen::Index i = 0; i < polar.size(); ++i) {
      polar.nodes(i, 0) = std::acos(polar.nodes(i, 0));
    }
  } else {
    polar = gauss_legendre(0.0, std::numbers::pi, polar_nodes);
    for (Eigen::Index i = 0; i < polar.size(); ++i) {
      polar.weights[i] *= std::pow(std::sin(polar.nodes(i, 0)), k - 1);
    }
  }
  rule.nodes.resize(polar.size() * lower.size(), k + 1);
  rule.weights.resize(polar.size() * lower.size());
  Eigen::Index out = 0;
  for (Eigen::Index i = 0; i < polar.size(); ++i) {
    const double t = polar.nodes(i, 0);
    for (Eigen::Index j = 0; j < lower.size(); ++j) {
      rule.nodes(out, 0) = std::cos(t);
      rule.nodes.row(out).tail(k) = std::sin(t) * lower.nodes.row(j);
      rule.weights[out] = polar.weights[i] * lower.weights[j];
      ++out;
    }
  }
  return rule;
}

QuadratureRule monte_carlo_rule(Dimension n, int count, std::uint64_t seed) {
  if (count < 1) {
    throw std::invalid_argument("monte_carlo_rule: count must be positive");
  }
  Rng rng(seed);
  QuadratureRule rule;
  rule.kind = RuleKind::monte_carlo;
  rule.nodes.resize(count, n.ambient());
  for (int i = 0; i < count; ++i) {
    for (int j = 0; j < n.ambient(); ++j) {
      rule.nodes(i, j) = rng.normal();
    }
    rule.nodes.row(i).normalize();
  }
  rule.weights.setConstant(count, surface_area(n.value()) / count);
  return rule;
}

Eigen::MatrixXd tangent_basis(const Eigen::VectorXd &x) {
  const auto d = x.size();
  Eigen::MatrixXd m(d, d);
  m.col(0) = x;
  // Swap out the identity column most parallel to x to keep the QR well posed.
  Eigen::Index axis = 0;
  x.cwiseAbs().maxCoeff(&axis);
  Eigen::Index col = 1;
  for (Eigen::Index j = 0; j < d; ++j) {
    if (j == axis) {
      continue;
    }
    m.col(col++) = Eigen::VectorXd::Unit(d, j);
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  const Eigen::MatrixXd q = qr.householderQ();
  return q.rightCols(d - 1);
}

PolarRule polar_cap_rule(const Eigen::VectorXd &center, const QuadratureRule &radial,
                         const QuadratureRule &angular) {
  const auto d = center.size();
  const int n = static_cast<int>(d) - 1;
  if (angular.nodes.cols() != n) {
    throw std::invalid_argument("polar_cap_rule: angular rule must live on S^{n-1}");
  }
  const Eigen::MatrixXd frame = tangent_basis(center);
  const Eigen::MatrixXd directions = angular.nodes * frame.transpose(); // M x d
  PolarRule rule;
  const Eigen::Index total = radial.size() * angular.size();
  rule.nodes.resize(total, d);
  rule.weights.resize(total);
  rule.radii.resize(total);
  Eigen::Index out = 0;
  for (Eigen::Index i = 0; i < radial.size(); ++i) {
    const double r = radial.nodes(i, 0);
    const double jac = radial.weights[i] * std::pow(std::sin(r), n - 1);
    for (Eigen::Index j = 0; j < angular.size(); ++j) {
      rule.nodes.row(out) = std::cos(r) * center.transpose() + std::sin(r) * directions.row(j);
      rule.weights[out] = jac * angular.weights[j];
      rule.radii[out] = r;
      ++out;
    }
  }
  return rule;
}

} // namespace theta_extremal
