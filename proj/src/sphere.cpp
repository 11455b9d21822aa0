#include "theta_extremal/sphere.hpp"

#include "theta_extremal/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace theta_extremal {

namespace {

// Inner products of unit vectors can overshoot +-1 by a few ulps.
double clamped_acos(double c) { return std::acos(std::clamp(c, -1.0, 1.0)); }

} // namespace

Dimension::Dimension(int n) : n_(n) {
  if (n < 1) {
    throw std::domain_error("sphere dimension must be >= 1, got " +
                            std::to_string(n));
  }
}

SpherePoint::SpherePoint(Eigen::VectorXd coords) : coords_(std::move(coords)) {
  if (coords_.size() < 2) {
    throw std::invalid_argument("SpherePoint needs at least 2 coordinates");
  }
  if (std::abs(coords_.norm() - 1.0) > kNormTolerance) {
    throw std::invalid_argument("SpherePoint is not unit norm (|x| = " +
                                std::to_string(coords_.norm()) + ")");
  }
}

SpherePoint SpherePoint::normalized(const Eigen::VectorXd &v) {
  const double norm = v.norm();
  if (!(norm > 1e-300)) {
    throw std::invalid_argument("cannot normalize a zero vector onto the sphere");
  }
  return SpherePoint(v / norm);
}

SpherePoint SpherePoint::basis(Dimension n, int axis) {
  if (axis < 0 || axis >= n.ambient()) {
    throw std::out_of_range("basis axis out of range");
  }
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n.ambient());
  e[axis] = 1.0;
  return SpherePoint(std::move(e));
}

double geodesic_distance(const Eigen::VectorXd &x, const Eigen::VectorXd &y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("geodesic_distance: dimension mismatch (" +
                                std::to_string(x.size()) + " vs " +
                                std::to_string(y.size()) + ")");
  }
  return clamped_acos(x.dot(y));
}

double geodesic_distance(const SpherePoint &x, const SpherePoint &y) {
  return geodesic_distance(x.coords(), y.coords());
}

std::string_view to_string(ConfigurationKind kind) {
  switch (kind) {
  case ConfigurationKind::antipodal:
    return "antipodal";
  case ConfigurationKind::simplex:
    return "simplex";
  case ConfigurationKind::cross_polytope:
    return "cross_polytope";
  case ConfigurationKind::roots_of_unity:
    return "roots_of_unity";
  }
  return "unknown";
}

ConfigurationKind configuration_kind_from_string(std::string_view name) {
  for (auto kind : {ConfigurationKind::antipodal, ConfigurationKind::simplex,
                    ConfigurationKind::cross_polytope,
                    ConfigurationKind::roots_of_unity}) {
    if (to_string(kind) == name) {
      return kind;
    }
  }
  throw std::invalid_argument("unknown configuration kind: " + std::string(name));
}

Eigen::MatrixXd random_rotation(int d, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd g(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      g(i, j) = rng.normal();
    }
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(d, d);
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Sign fix makes the distribution Haar.
  for (int j = 0; j < d; ++j) {
    if (r(j, j) < 0.0) {
      q.col(j) *= -1.0;
    }
  }
  return q;
}

namespace {

PointSet simplex_vertices(int n) {
  // Centered standard basis of R^{n+2}, expressed in the Helmert basis of
  // the hyperplane orthogonal to (1, ..., 1).
  const int k = n + 2;
  const int d = n + 1;
  Eigen::MatrixXd helmert = Eigen::MatrixXd::Zero(d, k);
  for (int row = 0; row < d; ++row) {
    const double j = row + 1;
    const double scale = 1.0 / std::sqrt(j * (j + 1.0));
    for (int col = 0; col < row + 1; ++col) {
      helmert(row, col) = scale;
    }
    helmert(row, row + 1) = -j * scale;
  }
  Eigen::MatrixXd centered =
      Eigen::MatrixXd::Identity(k, k) -
      Eigen::MatrixXd::Constant(k, k, 1.0 / static_cast<double>(k));
  PointSet pts = centered * helmert.transpose();
  for (int i = 0; i < k; ++i) {
    pts.row(i).normalize();
  }
  return pts;
}

} // namespace

PointSet make_configuration(ConfigurationKind kind, Dimension n,
                            const ConfigurationParams &params) {
  const int d = n.ambient();
  PointSet pts;
  switch (kind) {
  case ConfigurationKind::antipodal: {
    Eigen::VectorXd xi = params.pole.value_or(SpherePoint::basis(n, 0).coords());
    if (xi.size() != d) {
      throw std::invalid_argument("antipodal: pole dimension does not match n");
    }
    xi = SpherePoint::normalized(xi).coords();
    pts.resize(2, d);
    pts.row(0) = xi.transpose();
    pts.row(1) = -xi.transpose();
    return pts;
  }
  case ConfigurationKind::simplex:
    pts = simplex_vertices(n.value());
    break;
  case ConfigurationKind::cross_polytope:
    pts = PointSet::Zero(2 * d, d);
    for (int i = 0; i < d; ++i) {
      pts(2 * i, i) = 1.0;
      pts(2 * i + 1, i) = -1.0;
    }
    break;
  case ConfigurationKind::roots_of_unity: {
    if (n.value() != 1) {
      throw std::invalid_argument("roots_of_unity is only defined on S^1");
    }
    if (params.count < 1) {
      throw std::invalid_argument("roots_of_unity needs count >= 1");
    }
    pts.resize(params.count, 2);
    for (int j = 0; j < params.count; ++j) {
      const double a =
          params.phase + 2.0 * std::numbers::pi * static_cast<double>(j) / params.count;
      pts(j, 0) = std::cos(a);
      pts(j, 1) = std::sin(a);
    }
    return pts;
  }
  }
  if (params.rotation_seed) {
    pts = pts * random_rotation(d, *params.rotation_seed);
    for (Eigen::Index i = 0; i < pts.rows(); ++i) {
      pts.row(i).normalize();
    }
  }
  return pts;
}

double procrustes_max_deviation(const PointSet &found, const PointSet &reference) {
  if (found.rows() != reference.rows() || found.cols() != reference.cols()) {
    throw std::invalid_argument("procrustes: point sets differ in shape");
  }
  const auto k = static_cast<int>(found.rows());
  if (k > 9) {
    throw std::invalid_argument("procrustes: at most 9 points supported");
  }
  std::vector<int> perm(static_cast<std::size_t>(k));
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  PointSet matched(reference.rows(), reference.cols());
  do {
    for (int i = 0; i < k; ++i) {
      matched.row(i) = reference.row(perm[static_cast<std::size_t>(i)]);
    }
    const Eigen::MatrixXd cross = found.transpose() * matched;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(cross, Eigen::ComputeFullU |
                                                     Eigen::ComputeFullV);
    const Eigen::MatrixXd q = svd.matrixU() * svd.matrixV().transpose();
    const double dev = ((found * q) - matched).rowwise().norm().maxCoeff();
    best = std::min(best, dev);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

} // namespace theta_extremal
