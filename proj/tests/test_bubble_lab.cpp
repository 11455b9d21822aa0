#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "theta_extremal/bubble.hpp"
#include "theta_extremal/moment_basis.hpp"
#include "theta_extremal/quadrature.hpp"
#include "theta_extremal/sobolev.hpp"
#include "theta_extremal/special.hpp"
#include "theta_extremal/sphere.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>
#include <sstream>

using namespace theta_extremal;
namespace te = theta_extremal;

namespace {

const SobolevParams kP(Dimension(2), 1.5);

PointSet simplex(int n) { return make_configuration(ConfigurationKind::simplex, Dimension(n)); }

BubbleProfile profile(double eps, PointSet centers = simplex(2), double delta = 0.3) {
  return BubbleProfile(kP, eps, delta, BubbleProfile::default_tau(kP), std::move(centers));
}

// Simplex vertices nudged off their symmetric positions, still with disjoint caps.
PointSet perturbed_simplex() {
  PointSet c = simplex(2);
  const Eigen::MatrixXd q = random_rotation(3, 17);
  c = c * q;
  Eigen::MatrixXd nudge(4, 3);
  nudge << 0.08, -0.05, 0.02, -0.03, 0.06, 0.04, 0.05, 0.01, -0.07, -0.02, -0.04, 0.03;
  c += nudge;
  c.rowwise().normalize();
  return c;
}

} // namespace

TEST_CASE("phi: examples and continuity") {
  const BubbleProfile b = profile(1e-3);
  const double a = 2.0 / kP.p_star();
  CHECK(b.phi(0.9) == 0.0);
  CHECK(b.phi(0.6) == 0.0);
  CHECK(b.phi(0.0) == doctest::Approx(std::pow(1e-3, -a)).epsilon(1e-14));
  CHECK(b.phi(1e-30) == doctest::Approx(std::pow(1e-3, -a)).epsilon(1e-14));
  CHECK(b.phi(0.3 - 1e-13) == doctest::Approx(b.phi(0.3)).epsilon(1e-11));
  CHECK(b.phi(0.6 - 1e-13) < 1e-11);
  CHECK_THROWS_AS(b.phi(-0.1), std::domain_error);
  // derivative against central differences on both branches
  for (double t : {0.01, 0.1, 0.25, 0.4, 0.55}) {
    const double h = 1e-6;
    CHECK(b.dphi(t) == doctest::Approx((b.phi(t + h) - b.phi(t - h)) / (2 * h)).epsilon(1e-6));
  }
}

TEST_CASE("profile validation") {
  CHECK_THROWS_AS(profile(0.3), std::invalid_argument);
  CHECK_THROWS_AS(profile(-1e-3), std::invalid_argument);
  // tetrahedron geodesic distance 1.9106 < 4 * 0.5
  CHECK_THROWS_AS(profile(1e-3, simplex(2), 0.5), std::invalid_argument);
  CHECK_NOTHROW(profile(1e-3, simplex(2), 0.47));
  const double bound = BubbleProfile::tau_bound(kP);
  CHECK(bound == doctest::Approx(2.0 / 3.0));
  CHECK_THROWS_AS(BubbleProfile(kP, 1e-3, 0.3, bound, simplex(2)), std::invalid_argument);
  CHECK_THROWS_AS(BubbleProfile(kP, 1e-3, 0.3, 0.0, simplex(2)), std::invalid_argument);
}

TEST_CASE("leading coefficients") {
  const LeadingCoefficients c = leading_coefficients(kP);
  const double pi = std::numbers::pi;
  CHECK(c.c_num == doctest::Approx(2.0 * pi * 4.0 / 3.0 * te::beta(4.0 / 3.0, 2.0 / 3.0)));
  CHECK(std::abs(c.c_num - 10.128) < 5e-3);
  CHECK(std::abs(c.limit_ratio - 0.0881) < 1e-4);
  CHECK(rayleigh_target(kP) == doctest::Approx(0.0880557176488773).epsilon(1e-12));
  for (int n = 2; n <= 7; ++n) {
    for (double p : {1.1, 1.5, 1.9}) {
      const LeadingCoefficients d = leading_coefficients(SobolevParams(Dimension(n), p));
      CHECK(d.c_num > 0.0);
      CHECK(d.c_grad > 0.0);
    }
  }
}

TEST_CASE("the Beta route and the sharp constant route agree") {
  for (int n = 2; n <= 6; ++n) {
    for (double p : {1.2, 1.5, 2.0, (n + 1) / 2.0}) {
      if (p >= n) {
        continue;
      }
      CHECK(identity_discrepancy(SobolevParams(Dimension(n), p)) < 1e-10);
    }
  }
  CHECK(identity_discrepancy(SobolevParams(Dimension(5), 3.0)) < 1e-10);
}

TEST_CASE("c_num is the eps-scaled limit of the cap integral") {
  // Direct adaptive quadrature of one cap, rescaled by eps^{n/p}.
  const double eps = 1e-6;
  const BubbleProfile b = profile(eps);
  auto f = [&](double r) { return std::pow(b.phi(r), kP.p_star()) * std::sin(r); };
  using boost::math::quadrature::gauss_kronrod;
  double one_cap = 0.0;
  const double s = b.scale();
  const double cuts[] = {0.0, s * 1e-2, s * 1e-1, s, s * 10, s * 100, 0.3, 0.6};
  for (int i = 0; i + 1 < 8; ++i) {
    one_cap += gauss_kronrod<double, 31>::integrate(f, cuts[i], cuts[i + 1], 12, 1e-13);
  }
  const double scaled = 4.0 * 2.0 * std::numbers::pi * one_cap * std::pow(eps, 2.0 / 1.5);
  CHECK(scaled == doctest::Approx(leading_coefficients(kP).c_num).epsilon(1e-2));
  const MomentBasis basis = MomentBasis::build(Dimension(2), 2);
  const BubbleIntegrals ib = integrate_bubble(b, basis);
  CHECK(ib.I_pstar == doctest::Approx(4.0 * 2.0 * std::numbers::pi * one_cap).epsilon(1e-10));
}

TEST_CASE("leading ratio within 5% at eps = 1e-4") {
  const MomentBasis basis = MomentBasis::build(Dimension(2), 2);
  const double eps = 1e-4;
  const BubbleIntegrals ib = integrate_bubble(profile(eps), basis);
  const double ratio = ib.I_pstar / (leading_coefficients(kP).c_num * std::pow(eps, -2.0 / 1.5));
  CHECK(ratio > 0.95);
  CHECK(ratio < 1.05);
}

TEST_CASE("radial rule integrates sin^{n-1} and converges under refinement") {
  for (int n : {2, 3, 4}) {
    const QuadratureRule r = radial_rule(0.01, 0.3);
    CHECK(r.size() >= 200);
    double acc = 0.0;
    for (Eigen::Index i = 0; i < r.size(); ++i) {
      acc += r.weights[i] * std::pow(std::sin(r.nodes(i, 0)), n - 1);
    }
    // exact: int_0^{0.6} sin^{n-1}
    const double exact = n == 2 ? 1.0 - std::cos(0.6)
                         : n == 3 ? 0.3 - std::sin(1.2) / 4.0
                                  : (2.0 - 3.0 * std::cos(0.6) + std::pow(std::cos(0.6), 3)) / 3.0;
    CHECK(acc == doctest::Approx(exact).epsilon(1e-12));
  }
  const BubbleProfile b = profile(1e-3);
  auto integrate = [&](int k) {
    const QuadratureRule r = radial_rule(b.scale(), 0.3, {k, 3, 4});
    double acc = 0.0;
    for (Eigen::Index i = 0; i < r.size(); ++i) {
      const double t = r.nodes(i, 0);
      acc += r.weights[i] * std::pow(b.phi(t), kP.p_star()) * std::sin(t);
    }
    return acc;
  };
  const double reference = integrate(40);
  const double e1 = std::abs(integrate(2) - reference);
  const double e2 = std::abs(integrate(4) - reference);
  CHECK(e1 > 0.0);
  CHECK(e1 / e2 >= 3.0);
}

TEST_CASE("integrate_bubble rejects thin radial rules") {
  const MomentBasis basis = MomentBasis::build(Dimension(2), 2);
  BubbleOptions thin;
  thin.radial = {2, 1, 1};
  CHECK_THROWS_AS(integrate_bubble(profile(1e-3), basis, thin), std::invalid_argument);
  const MomentBasis wrong = MomentBasis::build(Dimension(3), 2);
  CHECK_THROWS_AS(integrate_bubble(profile(1e-3), wrong), std::invalid_argument);
}

TEST_CASE("integrals are rotation invariant") {
  const MomentBasis basis = MomentBasis::build(Dimension(2), 2);
  const PointSet c = perturbed_simplex();
  const BubbleIntegrals a = integrate_bubble(profile(1e-2, c), basis);
  const BubbleIntegrals b = integrate_bubble(profile(1e-2, c * random_rotation(3, 5)), basis);
  CHECK(a.I_pstar == doctest::Approx(b.I_pstar).epsilon(1e-13));
  CHECK(a.I_grad == doctest::Approx(b.I_grad).epsilon(1e-13));
  CHECK(a.moment_vec.norm() == doctest::Approx(b.moment_vec.norm()).epsilon(1e-9));
}

TEST_CASE("per-cap moments agree with the global rule") {
  const MomentBasis basis = MomentBasis::build(Dimension(2), 2);
  const BubbleProfile b = profile(1e-2, perturbed_simplex());
  const BubbleIntegrals local = integrate_bubble(b, basis);
  const QuadratureRule global = global_rule(Dimension(2), BubbleOptions{});
  CHECK(global.kind == RuleKind::product_gauss);
  CHECK(global.size() >= 200000);
  const Eigen::VectorXd g = global_moment_vector(b, basis, global);
  REQUIRE(local.moment_vec.norm() > 1e-3 * local.I_pstar);
  CHECK((g - local.moment_vec).norm() < 1e-3 * local.moment_vec.norm());
}

TEST_CASE("symmetric centers give an exactly balanced uncorrected moment") {
  // Every degree-2 moment of v^{p*} cancels across the simplex caps, so only
  // rounding remains; there is no eps^{-n/p+tau} defect to observe.
  const MomentBasis basis = MomentBasis::build(Dimension(2), 2);
  for (double eps : {1e-2, 1e-3, 1e-4}) {
    const BubbleIntegrals ib = integrate_bubble(profile(eps), basis);
    CHECK(ib.moment_vec.norm() / ib.I_pstar < 1e-12);
  }
}

TEST_CASE("bump gradient matches finite differences") {
  const BubbleProfile b = profile(1e-3);
  const Bump bump = place_bump(b, 0.25);
  CHECK(std::abs(bump.center.norm() - 1.0) < 1e-14);
  CHECK(bump.value(bump.center) == doctest::Approx(1.0));
  const Eigen::MatrixXd tb = tangent_basis(bump.center);
  for (double r : {0.05, 0.12, 0.2}) {
    for (double a : {0.3, 2.0, 4.4}) {
      const Eigen::VectorXd dir = tb * Eigen::Vector2d(std::cos(a), std::sin(a));
      const Eigen::VectorXd x = std::cos(r) * bump.center + std::sin(r) * dir;
      const Eigen::VectorXd g = bump.gradient(x);
      CHECK(std::abs(g.dot(x)) < 1e-12);
      const Eigen::MatrixXd tx = tangent_basis(x);
      for (int k = 0; k < 2; ++k) {
        const Eigen::VectorXd t = tx.col(k);
        const double h = 1e-6;
        const Eigen::VectorXd xp = std::cos(h) * x + std::sin(h) * t;
        const Eigen::VectorXd xm = std::cos(h) * x - std::sin(h) * t;
        const double fd = (bump.value(xp) - bump.value(xm)) / (2 * h);
        CHECK(g.dot(t) == doctest::Approx(fd).epsilon(1e-6));
      }
    }
  }
  // support stays off every cap
  for (Eigen::Index i = 0; i < b.centers().rows(); ++i) {
    CHECK(std::acos(b.centers().row(i).dot(bump.center)) > 0.25 + 0.6);
  }
}

TEST_CASE("correction removes the moment defect and keeps the floor") {
  const MomentBasis basis = MomentBasis::build(Dimension(2), 2);
  const BubbleOptions options;
  const QuadratureRule check = global_rule(Dimension(2), options);
  for (double eps : {1e-2, 1e-3}) {
    for (bool symmetric : {true, false}) {
      const BubbleProfile b = profile(eps, symmetric ? simplex(2) : perturbed_simplex());
      const BubbleIntegrals raw = integrate_bubble(b, basis, options);
      const CorrectedTestFunction u(b, basis, raw, options, check);
      CHECK(u.integrals().moment_residual < 1e-8);
      CHECK(u.integrals().min_floor_ratio >= 1.0);
      CHECK(u.system().condition_number < 1e8);
      // independent pass over the check nodes and a ring around the bump
      double worst = 1e300;
      for (Eigen::Index i = 0; i < check.size(); i += 7) {
        worst = std::min(worst, u.u_pstar(check.nodes.row(i).transpose()));
      }
      const Eigen::MatrixXd tb = tangent_basis(u.system().bump.center);
      for (double r = 0.0; r < 0.25; r += 0.01) {
        for (double a = 0.0; a < 6.28; a += 0.1) {
          const Eigen::VectorXd x = std::cos(r) * u.system().bump.center +
                                    std::sin(r) * (tb * Eigen::Vector2d(std::cos(a), std::sin(a)));
          worst = std::min(worst, u.u_pstar(x));
        }
      }
      CHECK(worst >= b.floor_scale() * (1.0 - 1e-9));
    }
  }
}

TEST_CASE("ill-conditioned correction systems are refused") {
  const MomentBasis basis = MomentBasis::build(Dimension(2), 2);
  BubbleOptions options;
  options.bump_radius = 0.02;
  const BubbleProfile b = profile(1e-2);
  const BubbleIntegrals raw = integrate_bubble(b, basis, options);
  CHECK_THROWS_AS(
      CorrectedTestFunction(b, basis, raw, options, sphere_product_rule(2, 20, 40)),
      std::runtime_error);
}

TEST_CASE("sweep: monotone, enveloped, beta scaling and CSV") {
  const std::vector<double> eps{1e-2, 1e-3, 1e-4};
  const SweepResult s = rayleigh_sweep(kP, eps);
  REQUIRE(s.rows.size() == 3);
  const double sp = std::pow(sharp_sobolev(kP), 1.5);
  for (std::size_t i = 0; i < s.rows.size(); ++i) {
    const SweepRow &r = s.rows[i];
    CHECK(r.R <= 1.05 * sp);
    CHECK(r.raw_R <= 1.05 * sp);
    CHECK(r.moment_residual < 1e-8);
    CHECK(r.target == doctest::Approx(rayleigh_target(kP)));
    CHECK(r.R == doctest::Approx(std::pow(r.I_pstar, 1.5 / kP.p_star()) / r.I_grad));
    if (i > 0) {
      CHECK(r.rel_err < s.rows[i - 1].rel_err);
      CHECK(r.raw_rel_err < s.rows[i - 1].raw_rel_err);
    }
  }
  CHECK(s.rows[2].beta_max / s.rows[1].beta_max <= 1.5 * std::pow(10.0, 2.0 / 1.5 - s.tau));
  CHECK(s.rows[2].leading_ratio > 0.95);

  const std::string csv = sweep_to_csv(s.rows);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "eps,I_pstar,I_p,I_grad,moment_residual,R,target,rel_err");
  int count = 0;
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::string cell;
    std::vector<double> values;
    while (std::getline(fields, cell, ',')) {
      values.push_back(std::stod(cell));
    }
    REQUIRE(values.size() == 8);
    const SweepRow &r = s.rows[static_cast<std::size_t>(count)];
    CHECK(values[0] == r.eps);
    CHECK(values[5] == r.R);
    CHECK(values[7] == r.rel_err);
    ++count;
  }
  CHECK(count == 3);
}

TEST_CASE("sweep rejects bad eps lists") {
  CHECK_THROWS_AS(rayleigh_sweep(kP, {}), std::invalid_argument);
  CHECK_THROWS_AS(rayleigh_sweep(kP, {1e-3, 1e-2}), std::invalid_argument);
  CHECK_THROWS_AS(rayleigh_sweep(kP, {1e-3, 1e-3}), std::invalid_argument);
  CHECK_THROWS_AS(rayleigh_sweep(kP, {0.5, 1e-3}), std::invalid_argument);
  CHECK_THROWS_AS(rayleigh_sweep(kP, {1e-3, 0.0}), std::invalid_argument);
}

TEST_CASE("n = 3 sweep with a Monte Carlo check rule") {
  const SobolevParams p3(Dimension(3), 2.0);
  BubbleOptions options;
  options.monte_carlo_nodes = 20000;
  options.delta = 0.4;
  const SweepResult s = rayleigh_sweep(p3, {1e-2, 1e-3}, options);
  CHECK(s.global_rule_kind == "monte_carlo");
  REQUIRE(s.rows.size() == 2);
  for (const SweepRow &r : s.rows) {
    CHECK(r.moment_residual < 1e-8);
    CHECK(r.raw_moment_residual < 1e-12);
    CHECK(r.min_floor_ratio >= 1.0);
  }
  CHECK(s.rows[1].rel_err < s.rows[0].rel_err);
  CHECK(std::abs(s.rows[1].leading_ratio - 1.0) < 0.1);
}
