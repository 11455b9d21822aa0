#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string_view>

namespace theta_extremal {

/// Sphere dimension n (the sphere S^n lives in R^{n+1}). Always >= 1.
class Dimension {
public:
  explicit Dimension(int n);
  int value() const { return n_; }
  int ambient() const { return n_ + 1; }
  friend bool operator==(Dimension, Dimension) = default;

private:
  int n_;
};

/// Row-major list of points; row i is a point in R^{n+1}.
using PointSet = Eigen::MatrixXd;

/// Unit vector in R^{n+1}.
class SpherePoint {
public:
  static constexpr double kNormTolerance = 1e-12;

  /// Throws std::invalid_argument unless |coords| = 1 within 1e-12.
  explicit SpherePoint(Eigen::VectorXd coords);

  /// Normalizes `v`; throws if v is (numerically) zero.
  static SpherePoint normalized(const Eigen::VectorXd &v);

  /// Standard basis vector e_{axis} of R^{n+1}.
  static SpherePoint basis(Dimension n, int axis);

  const Eigen::VectorXd &coords() const { return coords_; }
  Dimension dimension() const { return Dimension(static_cast<int>(coords_.size()) - 1); }
  double operator[](Eigen::Index i) const { return coords_[i]; }

private:
  Eigen::VectorXd coords_;
};

/// Geodesic distance in [0, pi]; the inner product is clamped to [-1, 1].
double geodesic_distance(const SpherePoint &x, const SpherePoint &y);
double geodesic_distance(const Eigen::VectorXd &x, const Eigen::VectorXd &y);

enum class ConfigurationKind { antipodal, simplex, cross_polytope, roots_of_unity };

std::string_view to_string(ConfigurationKind kind);
ConfigurationKind configuration_kind_from_string(std::string_view name);

struct ConfigurationParams {
  /// Antipodal pole xi; defaults to e_1.
  std::optional<Eigen::VectorXd> pole;
  /// Roots of unity: number of points (m + 1) and phase alpha.
  int count = 0;
  double phase = 0.0;
  /// Simplex / cross-polytope: apply a seeded Haar rotation when set.
  std::optional<std::uint64_t> rotation_seed;
};

/// Canonical extremal configurations; rows of the result are unit vectors.
///   antipodal       {xi, -xi}
///   simplex         n + 2 vertices with pairwise inner products -1/(n+1)
///   cross_polytope  +-e_i, 2n + 2 points
///   roots_of_unity  count points e^{i(phase + 2 pi j / count)} on S^1
PointSet make_configuration(ConfigurationKind kind, Dimension n,
                            const ConfigurationParams &params = {});

/// Haar-distributed orthogonal matrix of size d, deterministic in `seed`.
Eigen::MatrixXd random_rotation(int d, std::uint64_t seed);

/// Residual of the best alignment of `found` onto `reference`: minimum over
/// point matchings and orthogonal maps Q of max_i |found_i Q - ref_i|.
/// Both sets must have the same size (<= 9 points; matchings are enumerated).
double procrustes_max_deviation(const PointSet &found, const PointSet &reference);

} // namespace theta_extremal
