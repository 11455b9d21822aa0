#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "theta_extremal/measure.hpp"
#include "theta_extremal/moment_basis.hpp"
#include "theta_extremal/quadrature.hpp"
#include "theta_extremal/random.hpp"
#include "theta_extremal/special.hpp"

#include <cmath>
#include <numbers>
#include <vector>

using namespace theta_extremal;

namespace {

// Gamma-product form, evaluated independently of the library's rational form.
double average_by_gamma(int n, const std::vector<int> &a) {
  double num = 2.0;
  double total = 0.0;
  for (int e : a) {
    if (e % 2 != 0) {
      return 0.0;
    }
    num *= std::tgamma((e + 1) / 2.0);
    total += (e + 1) / 2.0;
  }
  const double area = 2.0 * std::pow(std::numbers::pi, (n + 1) / 2.0) / std::tgamma((n + 1) / 2.0);
  return num / std::tgamma(total) / area;
}

int binomial(int a, int b) {
  double r = 1.0;
  for (int i = 1; i <= b; ++i) {
    r = r * (a - b + i) / i;
  }
  return static_cast<int>(std::lround(r));
}

} // namespace

TEST_CASE("monomial averages: examples") {
  for (int n = 1; n <= 5; ++n) {
    std::vector<int> x1(static_cast<std::size_t>(n + 1), 0);
    x1[0] = 1;
    CHECK(monomial_sphere_average(Dimension(n), x1) == 0.0);
    x1[0] = 2;
    CHECK(monomial_sphere_average(Dimension(n), x1) == doctest::Approx(1.0 / (n + 1)).epsilon(1e-15));
  }
  const std::vector<int> quartic{4, 0, 0};
  CHECK(monomial_sphere_average(Dimension(2), quartic) == doctest::Approx(0.2).epsilon(1e-15));
}

TEST_CASE("avg(x1^4) on S^2 agrees with Monte Carlo within 3 sigma") {
  Rng rng(2024);
  const int samples = 1000000;
  double sum = 0.0;
  double sum2 = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double a = rng.normal();
    const double b = rng.normal();
    const double c = rng.normal();
    const double x = a / std::sqrt(a * a + b * b + c * c);
    const double v = x * x * x * x;
    sum += v;
    sum2 += v * v;
  }
  const double mean = sum / samples;
  const double sigma = std::sqrt((sum2 / samples - mean * mean) / samples);
  const std::vector<int> quartic{4, 0, 0};
  CHECK(std::abs(mean - monomial_sphere_average(Dimension(2), quartic)) < 3.0 * sigma);
}

TEST_CASE("rational form equals the Gamma-product form") {
  for (int n = 1; n <= 5; ++n) {
    for (const auto &a : graded_monomials(n + 1, 6)) {
      CHECK(monomial_sphere_average(Dimension(n), a) ==
            doctest::Approx(average_by_gamma(n, a)).epsilon(1e-13));
    }
  }
}

TEST_CASE("graded monomial order") {
  const auto mons = graded_monomials(2, 2);
  REQUIRE(mons.size() == 5);
  CHECK(mons[0] == MultiIndex{1, 0});
  CHECK(mons[1] == MultiIndex{0, 1});
  CHECK(mons[2] == MultiIndex{2, 0});
  CHECK(mons[3] == MultiIndex{1, 1});
  CHECK(mons[4] == MultiIndex{0, 2});
  CHECK(graded_monomials(4, 3).size() == static_cast<std::size_t>(binomial(7, 4) - 1));
}

TEST_CASE("basis rank: examples and the degree-2 formula") {
  CHECK(MomentBasis::build(Dimension(2), 2).rank() == 8);
  CHECK(MomentBasis::build(Dimension(3), 2).rank() == 13);
  CHECK(MomentBasis::build(Dimension(1), 1).rank() == 2);
  for (int n = 1; n <= 6; ++n) {
    CHECK(MomentBasis::build(Dimension(n), 2).rank() == (n * n + 3 * n) / 2 + n + 1);
  }
  for (int n = 1; n <= 4; ++n) {
    for (int m = 1; m <= 5; ++m) {
      const int expected = binomial(m + n, n) + binomial(m + n - 1, n) - 1;
      CHECK(MomentBasis::build(Dimension(n), m).rank() == expected);
      CHECK(mean_zero_space_dimension(Dimension(n), m) == expected);
    }
  }
  // Circle: cos k phi, sin k phi for k = 1..m.
  CHECK(MomentBasis::build(Dimension(1), 6).rank() == 12);
}

TEST_CASE("basis is mean-zero and orthonormal under an independent quadrature") {
  // 100 x 100 product rule on S^2 (exact far beyond degree 8).
  const QuadratureRule rule = sphere_product_rule(2, 100, 100);
  REQUIRE(rule.size() == 10000);
  const double area = surface_area(2);
  for (int m = 1; m <= 4; ++m) {
    const MomentBasis basis = MomentBasis::build(Dimension(2), m);
    const Eigen::MatrixXd f = basis.evaluate(rule.nodes);
    const Eigen::VectorXd means = f.transpose() * rule.weights / area;
    CHECK(means.cwiseAbs().maxCoeff() < 1e-8);
    const Eigen::MatrixXd gram = f.transpose() * rule.weights.asDiagonal() * f / area;
    CHECK((gram - Eigen::MatrixXd::Identity(basis.rank(), basis.rank())).cwiseAbs().maxCoeff() <
          1e-8);
  }
  const QuadratureRule rule3 = sphere_product_rule(3, 24, 24);
  const MomentBasis basis3 = MomentBasis::build(Dimension(3), 3);
  const Eigen::MatrixXd f3 = basis3.evaluate(rule3.nodes);
  const Eigen::MatrixXd gram3 =
      f3.transpose() * rule3.weights.asDiagonal() * f3 / surface_area(3);
  CHECK((gram3 - Eigen::MatrixXd::Identity(basis3.rank(), basis3.rank())).cwiseAbs().maxCoeff() <
        1e-8);
}

TEST_CASE("jacobian matches finite differences") {
  const MomentBasis basis = MomentBasis::build(Dimension(2), 3);
  Eigen::VectorXd x(3);
  x << 0.3, -0.5, 0.81;
  const Eigen::MatrixXd jac = basis.jacobian(x);
  for (int j = 0; j < 3; ++j) {
    Eigen::VectorXd h = Eigen::VectorXd::Zero(3);
    h[j] = 1e-6;
    const Eigen::VectorXd fd = (basis.evaluate(Eigen::VectorXd(x + h)) -
                                basis.evaluate(Eigen::VectorXd(x - h))) / 2e-6;
    CHECK((fd - jac.col(j)).cwiseAbs().maxCoeff() < 1e-7);
  }
}

TEST_CASE("moment residual: examples") {
  for (int n = 1; n <= 5; ++n) {
    const MomentBasis m2 = MomentBasis::build(Dimension(n), 2);
    const auto simplex = DiscreteMeasure::uniform(
        make_configuration(ConfigurationKind::simplex, Dimension(n)));
    CHECK(moment_residual(simplex, m2).norm() < 1e-10);

    const MomentBasis m1 = MomentBasis::build(Dimension(n), 1);
    PointSet pole = PointSet::Zero(1, n + 1);
    pole(0, 0) = 1.0;
    const auto point_mass = DiscreteMeasure::uniform(pole);
    // Basis functions sqrt(n+1) x_j give residual sqrt(n+1) |xi|.
    const double r = moment_residual(point_mass, m1).norm();
    CHECK(r > 0.9);
    CHECK(r == doctest::Approx(std::sqrt(n + 1.0)).epsilon(1e-12));

    const auto antipodal = DiscreteMeasure::uniform(
        make_configuration(ConfigurationKind::antipodal, Dimension(n)));
    CHECK(moment_residual(antipodal, m1).norm() < 1e-12);
  }
}

TEST_CASE("moment residual is linear in the weights") {
  const MomentBasis basis = MomentBasis::build(Dimension(3), 3);
  Rng rng(5);
  PointSet x(7, 4);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < 4; ++j) {
      x(i, j) = rng.normal();
    }
    x.row(i).normalize();
  }
  Eigen::VectorXd a(7);
  Eigen::VectorXd b(7);
  for (int i = 0; i < 7; ++i) {
    a[i] = rng.uniform();
    b[i] = rng.uniform() - 0.5;
  }
  const Eigen::VectorXd lhs = moment_residual(x, Eigen::VectorXd(2.0 * a - 3.0 * b), basis);
  const Eigen::VectorXd rhs = 2.0 * moment_residual(x, a, basis) - 3.0 * moment_residual(x, b, basis);
  CHECK((lhs - rhs).norm() < 1e-12);
}

TEST_CASE("moment residual rejects dimension mismatch") {
  const MomentBasis basis = MomentBasis::build(Dimension(2), 2);
  const auto measure = DiscreteMeasure::uniform(
      make_configuration(ConfigurationKind::simplex, Dimension(3)));
  CHECK_THROWS_AS(moment_residual(measure, basis), std::invalid_argument);
  CHECK_THROWS(MomentBasis::build(Dimension(2), 0));
}
