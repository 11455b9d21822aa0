#pragma once

#include "theta_extremal/sphere.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string_view>
#include <vector>

namespace theta_extremal {

enum class RuleKind { product_gauss, monte_carlo, radial_1d };

std::string_view to_string(RuleKind kind);

/// Nodes and weights. For sphere rules each row of `nodes` is a point of S^n
/// and the weights sum to |S^n|; for radial_1d `nodes` has one column.
struct QuadratureRule {
  RuleKind kind = RuleKind::product_gauss;
  Eigen::MatrixXd nodes;
  Eigen::VectorXd weights;

  Eigen::Index size() const { return weights.size(); }
};

/// k-point Gauss-Legendre rule on [a, b] (radial_1d).
QuadratureRule gauss_legendre(double a, double b, int k);

/// Composite Gauss-Legendre rule with `k` nodes on each panel between
/// consecutive (increasing) breakpoints.
QuadratureRule composite_gauss(const std::vector<double> &breakpoints, int k);

struct RadialRuleOptions {
  int nodes_per_panel = 12;
  /// Panels per decade in the log-spaced part.
  int panels_per_decade = 3;
  /// Log spacing starts this many decades below the bubble scale.
  int decades_below = 4;
};

/// Radial rule on [0, 2 delta] for a bubble of scale `scale` (= eps^{1/p'}):
/// log-spaced panels from scale * 10^{-decades_below} up to delta, then one
/// panel for the taper (delta, 2 delta). Nodes never sit on 0, delta, 2 delta.
QuadratureRule radial_rule(double scale, double delta, const RadialRuleOptions &options = {});

/// Product rule on S^k in R^{k+1}: Gauss-Legendre in each polar angle with
/// weight sin^{j-1}, uniform in the azimuth. Weights sum to |S^k|.
QuadratureRule sphere_product_rule(int k, int polar_nodes, int azimuth_nodes);

/// `count` uniform random points on S^n with equal weights |S^n| / count.
QuadratureRule monte_carlo_rule(Dimension n, int count, std::uint64_t seed);

/// (n+1) x n matrix whose columns are an orthonormal basis of x^perp.
Eigen::MatrixXd tangent_basis(const Eigen::VectorXd &x);

/// Geodesic polar rule on the cap of radius max(radial nodes) around
/// `center`: nodes cos(r) c + sin(r) B w, weights w_r sin^{n-1}(r) w_w.
struct PolarRule {
  PointSet nodes;
  Eigen::VectorXd weights;
  /// Geodesic radius of each node.
  Eigen::VectorXd radii;
};

PolarRule polar_cap_rule(const Eigen::VectorXd &center, const QuadratureRule &radial,
                         const QuadratureRule &angular);

} // namespace theta_extremal
