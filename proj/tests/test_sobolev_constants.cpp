#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "theta_extremal/sobolev.hpp"
#include "theta_extremal/special.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <numbers>

using namespace theta_extremal;
namespace te = theta_extremal;
using big = boost::multiprecision::cpp_bin_float_50;

namespace {

// Independent 50-digit evaluation of the sharp constant.
double sharp_oracle(int n, double p_in) {
  const big p = p_in;
  const big nn = n;
  const big pi = boost::math::constants::pi<big>();
  const big area = 2 * pow(pi, nn / 2) / boost::math::tgamma(nn / 2);
  const big fact = boost::math::tgamma(nn + 1);
  const big g = fact / (boost::math::tgamma(nn / p) * boost::math::tgamma(nn + 1 - nn / p) * area);
  const big s = pow(nn * (p - 1) / (nn - p), 1 - 1 / p) * pow(g, 1 / nn) / nn;
  return static_cast<double>(s);
}

double sphere_area(int n) {
  return 2.0 * std::pow(std::numbers::pi, (n + 1) / 2.0) / std::tgamma((n + 1) / 2.0);
}

} // namespace

TEST_CASE("params derive the exponents") {
  const SobolevParams s(Dimension(3), 2.0);
  CHECK(s.p_prime() == doctest::Approx(2.0));
  CHECK(s.p_star() == doctest::Approx(6.0));
  CHECK(s.theta() == doctest::Approx(1.0 / 3.0));
  for (int n = 2; n <= 7; ++n) {
    for (double p : {1.1, 1.5, 1.9}) {
      if (p >= n) {
        continue;
      }
      const SobolevParams q(Dimension(n), p);
      CHECK(q.theta() == doctest::Approx(p / q.p_star()).epsilon(1e-15));
      CHECK(1.0 / q.p() + 1.0 / q.p_prime() == doctest::Approx(1.0).epsilon(1e-15));
      CHECK(q.p_star() > q.p());
      CHECK(q.theta() > 0.0);
      CHECK(q.theta() < 1.0);
    }
  }
  CHECK_THROWS_AS(SobolevParams(Dimension(3), 1.0), std::domain_error);
  CHECK_THROWS_AS(SobolevParams(Dimension(3), 3.0), std::domain_error);
  CHECK_THROWS_AS(SobolevParams(Dimension(2), 2.5), std::domain_error);
}

TEST_CASE("sharp constant: examples") {
  // Quoted values are rounded; the multiprecision oracle pins the digits.
  CHECK(std::abs(sharp_sobolev(SobolevParams(Dimension(3), 2.0)) - 0.4272554) < 1e-5);
  CHECK(std::abs(sharp_sobolev(SobolevParams(Dimension(2), 1.5)) - 0.3958562) < 1e-5);
  const double near = sharp_sobolev(SobolevParams(Dimension(3), 2.999));
  CHECK(std::isfinite(near));
  CHECK(near > sharp_sobolev(SobolevParams(Dimension(3), 2.9)));
}

TEST_CASE("sharp constant matches a 50-digit oracle") {
  for (int n = 2; n <= 8; ++n) {
    for (double p : {1.05, 1.2, 1.5, 2.0, 2.5, 3.7, 5.5}) {
      if (p >= n) {
        continue;
      }
      const double s = sharp_sobolev(SobolevParams(Dimension(n), p));
      CHECK(s == doctest::Approx(sharp_oracle(n, p)).epsilon(1e-12));
    }
  }
}

TEST_CASE("p = 2 reduction") {
  for (int n = 3; n <= 6; ++n) {
    const double s = sharp_sobolev(SobolevParams(Dimension(n), 2.0));
    const double classical = 4.0 / (n * (n - 2.0)) * std::pow(sphere_area(n), -2.0 / n);
    CHECK(std::abs(s * s / classical - 1.0) < 1e-10);
    CHECK(sharp_sobolev_p2_squared(Dimension(n)) == doctest::Approx(classical).epsilon(1e-14));
  }
  CHECK_THROWS_AS(sharp_sobolev_p2_squared(Dimension(2)), std::domain_error);
}

TEST_CASE("biharmonic constant") {
  const double pi = std::numbers::pi;
  CHECK(sharp_biharmonic(Dimension(5)) ==
        doctest::Approx(4.0 / std::sqrt(105.0) * std::pow(pi * pi * pi, -0.4)).epsilon(1e-13));
  CHECK(std::abs(sharp_biharmonic(Dimension(5)) - 0.0988) < 1e-4);
  CHECK(sharp_biharmonic(Dimension(6)) ==
        doctest::Approx(4.0 / std::sqrt(384.0) * std::pow(16.0 * pi * pi * pi / 15.0, -1.0 / 3.0))
            .epsilon(1e-13));
  CHECK(std::abs(sharp_biharmonic(Dimension(6)) - 0.0635) < 1e-4);
  CHECK_THROWS_AS(sharp_biharmonic(Dimension(4)), std::domain_error);
  CHECK_THROWS_AS(sharp_biharmonic(Dimension(2)), std::domain_error);
}

TEST_CASE("improved constants") {
  const SobolevParams p32(Dimension(3), 2.0);
  const double s2 = std::pow(sharp_sobolev(p32), 2.0);
  CHECK(std::abs(improved_constant(p32, 2) - 0.0624) < 1e-4);
  CHECK(improved_constant(p32, 2) == doctest::Approx(s2 / std::pow(5.0, 2.0 / 3.0)));
  CHECK(improved_constant(p32, 1) == doctest::Approx(std::pow(2.0, -2.0 / 3.0) * s2));
  for (int n = 2; n <= 6; ++n) {
    for (double p : {1.3, 1.8}) {
      const SobolevParams q(Dimension(n), p);
      CHECK(improved_constant(q, 2) / improved_constant(q, 1) ==
            doctest::Approx(std::pow(2.0 / (n + 2.0), p / n)).epsilon(1e-13));
      CHECK(improved_constant(q, 1) > improved_constant(q, 2));
      CHECK(improved_constant(q, 2) > improved_constant(q, 3));
    }
  }
  CHECK_THROWS_AS(improved_constant(p32, 4), std::invalid_argument);
}

TEST_CASE("odd-order constant is only described") {
  CHECK_FALSE(odd_order_constant_definition().empty());
}

TEST_CASE("gamma and beta agree with boost") {
  for (double x : {0.1, 0.5, 1.0, 2.5, 7.3, 30.0}) {
    CHECK(te::gamma(x) == doctest::Approx(boost::math::tgamma(x)).epsilon(1e-13));
  }
  CHECK(te::beta(2.0, 3.0) == doctest::Approx(1.0 / 12.0).epsilon(1e-14));
}
