#include "theta_extremal/bubble.hpp"

#include "theta_extremal/report.hpp"
#include "theta_extremal/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace theta_extremal {

namespace {

constexpr int kMinRadialNodes = 200;

double min_pairwise_distance(const PointSet &centers) {
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < centers.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < centers.rows(); ++j) {
      best = std::min(best, geodesic_distance(Eigen::VectorXd(centers.row(i).transpose()),
                                              Eigen::VectorXd(centers.row(j).transpose())));
    }
  }
  return best;
}

QuadratureRule angular_rule(Dimension n, const BubbleOptions &options) {
  return sphere_product_rule(n.value() - 1, options.angular_polar_nodes,
                             options.angular_azimuth_nodes);
}

} // namespace

BubbleProfile::BubbleProfile(SobolevParams params, double eps, double delta, double tau,
                             PointSet centers)
    : params_(params), eps_(eps), delta_(delta), tau_(tau), centers_(std::move(centers)) {
  if (!(eps > 0.0) || !(eps < delta)) {
    throw std::invalid_argument("bubble: need 0 < eps < delta");
  }
  const double bound = tau_bound(params_);
  if (!(tau > 0.0) || !(tau < bound)) {
    throw std::invalid_argument("bubble: tau must lie in (0, " + format_double(bound) + ")");
  }
  if (centers_.cols() != params_.n().ambient() || centers_.rows() < 1) {
    throw std::invalid_argument("bubble: centers must be points of S^n");
  }
  if (centers_.rows() > 1 && !(min_pairwise_distance(centers_) > 4.0 * delta)) {
    throw std::invalid_argument("bubble: caps of radius 2 delta overlap (delta = " +
                                format_double(delta) + ")");
  }
}

double BubbleProfile::tau_bound(const SobolevParams &params) {
  const double n = params.n().value();
  return std::min({n / params.p(), 2.0 / params.p_prime(),
                   params.p_star() / params.p_prime()});
}

double BubbleProfile::default_tau(const SobolevParams &params) {
  return 0.9 * tau_bound(params);
}

double BubbleProfile::phi(double t) const {
  if (t < 0.0) {
    throw std::domain_error("phi: radius must be nonnegative");
  }
  const double a = params_.n().value() / params_.p_star();
  if (t < delta_) {
    return std::pow(eps_ + std::pow(t, params_.p_prime()), -a);
  }
  if (t < 2.0 * delta_) {
    return std::pow(eps_ + std::pow(delta_, params_.p_prime()), -a) * (2.0 - t / delta_);
  }
  return 0.0;
}

double BubbleProfile::dphi(double t) const {
  const double a = params_.n().value() / params_.p_star();
  const double pp = params_.p_prime();
  if (t < delta_) {
    return -a * std::pow(eps_ + std::pow(t, pp), -a - 1.0) * pp * std::pow(t, pp - 1.0);
  }
  if (t < 2.0 * delta_) {
    return -std::pow(eps_ + std::pow(delta_, pp), -a) / delta_;
  }
  return 0.0;
}

double BubbleProfile::scale() const { return std::pow(eps_, 1.0 / params_.p_prime()); }

double BubbleProfile::floor_scale() const {
  return std::pow(eps_, -params_.n().value() / params_.p() + tau_);
}

double BubbleProfile::v(const Eigen::VectorXd &x) const {
  const Eigen::VectorXd inner = centers_ * x;
  const double c = std::clamp(inner.maxCoeff(), -1.0, 1.0);
  return phi(std::acos(c));
}

LeadingCoefficients leading_coefficients(const SobolevParams &params) {
  const double n = params.n().value();
  const double p = params.p();
  const double pp = params.p_prime();
  if (!(n / p > 1.0)) {
    throw std::domain_error("leading_coefficients: need p < n");
  }
  const double area = surface_area(params.n().value() - 1);
  LeadingCoefficients c;
  c.c_num = area * (n + 2.0) / pp * beta(n / p, n / pp);
  c.c_grad = area * std::pow((n - p) / (p - 1.0), p) * (n + 2.0) / pp *
             beta(n / p - 1.0, n / pp + 1.0);
  c.limit_ratio = std::pow(c.c_num, p / params.p_star()) / c.c_grad;
  return c;
}

double rayleigh_target(const SobolevParams &params) {
  const double n = params.n().value();
  return std::pow(n + 2.0, -params.p() / n) * std::pow(sharp_sobolev(params), params.p());
}

double identity_discrepancy(const SobolevParams &params) {
  const double n = params.n().value();
  const double p = params.p();
  const double pp = params.p_prime();
  const double lhs = std::pow(surface_area(params.n().value() - 1), -p / n) *
                     std::pow((p - 1.0) / (n - p), p) * std::pow((n + 2.0) / pp, -p / n) *
                     std::pow(beta(n / p, n / pp), p / params.p_star()) /
                     beta(n / p - 1.0, n / pp + 1.0);
  return std::abs(lhs - rayleigh_target(params));
}

BubbleIntegrals integrate_bubble(const BubbleProfile &profile, const MomentBasis &basis,
                                 const BubbleOptions &options) {
  const SobolevParams &sp = profile.params();
  const Dimension n = sp.n();
  if (basis.dimension() != n) {
    throw std::invalid_argument("integrate_bubble: basis dimension mismatch");
  }
  const QuadratureRule radial = radial_rule(profile.scale(), profile.delta(), options.radial);
  if (radial.size() < kMinRadialNodes) {
    throw std::invalid_argument("integrate_bubble: radial rule has " +
                                std::to_string(radial.size()) + " nodes, need at least " +
                                std::to_string(kMinRadialNodes));
  }
  const double caps = static_cast<double>(profile.centers().rows());
  const double area = surface_area(n.value() - 1);
  BubbleIntegrals out;
  Eigen::VectorXd phi_pstar(radial.size());
  for (Eigen::Index i = 0; i < radial.size(); ++i) {
    const double r = radial.nodes(i, 0);
    const double jac = radial.weights[i] * std::pow(std::sin(r), n.value() - 1);
    const double ph = profile.phi(r);
    phi_pstar[i] = std::pow(ph, sp.p_star());
    out.I_pstar += jac * phi_pstar[i];
    out.I_p += jac * std::pow(ph, sp.p());
    out.I_grad += jac * std::pow(std::abs(profile.dphi(r)), sp.p());
  }
  out.I_pstar *= caps * area;
  out.I_p *= caps * area;
  out.I_grad *= caps * area;

  const QuadratureRule angular = angular_rule(n, options);
  out.moment_vec = Eigen::VectorXd::Zero(basis.rank());
  for (Eigen::Index c = 0; c < profile.centers().rows(); ++c) {
    const PolarRule cap =
        polar_cap_rule(profile.centers().row(c).transpose(), radial, angular);
    Eigen::VectorXd w(cap.weights.size());
    for (Eigen::Index k = 0; k < w.size(); ++k) {
      // Nodes are laid out radius-major, angular-minor.
      w[k] = cap.weights[k] * phi_pstar[k / angular.size()];
    }
    out.moment_vec += basis.evaluate(cap.nodes).transpose() * w;
  }
  return out;
}

Eigen::VectorXd global_moment_vector(const BubbleProfile &profile, const MomentBasis &basis,
                                     const QuadratureRule &rule) {
  Eigen::VectorXd w(rule.size());
  for (Eigen::Index i = 0; i < rule.size(); ++i) {
    w[i] = rule.weights[i] *
           std::pow(profile.v(rule.nodes.row(i).transpose()), profile.params().p_star());
  }
  return basis.evaluate(rule.nodes).transpose() * w;
}

QuadratureRule global_rule(Dimension n, const BubbleOptions &options) {
  if (n.value() == 2) {
    return sphere_product_rule(2, options.global_polar_nodes, options.global_azimuth_nodes);
  }
  return monte_carlo_rule(n, options.monte_carlo_nodes, options.seed);
}

double Bump::value(const Eigen::VectorXd &x) const {
  const double d = geodesic_distance(x, center);
  const double s = d / radius;
  if (s >= 1.0) {
    return 0.0;
  }
  return std::exp(1.0 - 1.0 / (1.0 - s * s));
}

Eigen::VectorXd Bump::gradient(const Eigen::VectorXd &x) const {
  const Eigen::VectorXd toward = center - x.dot(center) * x;
  const double sin_d = toward.norm();
  const double d = geodesic_distance(x, center);
  const double s = d / radius;
  if (s >= 1.0 || sin_d < 1e-14) {
    return Eigen::VectorXd::Zero(x.size());
  }
  const double q = 1.0 - s * s;
  const double deta = std::exp(1.0 - 1.0 / q) * (-2.0 * s / (q * q)) / radius;
  // grad d = -toward / sin d.
  return -deta * toward / sin_d;
}

Bump place_bump(const BubbleProfile &profile, double radius) {
  const PointSet &centers = profile.centers();
  double best_gap = -1.0;
  Eigen::VectorXd best;
  for (Eigen::Index i = 0; i < centers.rows(); ++i) {
    const Eigen::VectorXd candidate = -centers.row(i).transpose();
    const double gap = std::acos(std::clamp((centers * candidate).maxCoeff(), -1.0, 1.0));
    if (gap > best_gap) {
      best_gap = gap;
      best = candidate;
    }
  }
  if (!(best_gap > 2.0 * profile.delta() + radius)) {
    throw std::invalid_argument("bump of radius " + format_double(radius) +
                                " would meet a cap; choose a smaller bump radius");
  }
  return Bump{best, radius};
}

CorrectedTestFunction::CorrectedTestFunction(const BubbleProfile &profile,
                                             const MomentBasis &basis,
                                             const BubbleIntegrals &raw,
                                             const BubbleOptions &options,
                                             const QuadratureRule &check_rule)
    : profile_(profile), basis_(basis) {
  const SobolevParams &sp = profile.params();
  const Dimension n = sp.n();
  const double ps = sp.p_star();
  const double p = sp.p();
  system_.bump = place_bump(profile, options.bump_radius);
  system_.floor_scale = profile.floor_scale();

  std::vector<double> breaks;
  for (int i = 0; i <= options.bump_panels; ++i) {
    breaks.push_back(options.bump_radius * i / options.bump_panels);
  }
  const QuadratureRule radial = composite_gauss(breaks, options.bump_nodes_per_panel);
  const PolarRule rule =
      polar_cap_rule(system_.bump.center, radial, angular_rule(n, options));
  const Eigen::Index count = rule.weights.size();
  const Eigen::MatrixXd f = basis.evaluate(rule.nodes); // count x l
  Eigen::VectorXd eta(count);
  for (Eigen::Index i = 0; i < count; ++i) {
    eta[i] = system_.bump.value(rule.nodes.row(i).transpose());
  }
  const Eigen::VectorXd w_eta2 = rule.weights.cwiseProduct(eta.cwiseAbs2());
  system_.gram = f.transpose() * w_eta2.asDiagonal() * f;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(system_.gram);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  system_.condition_number = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  if (!(system_.condition_number < options.max_condition)) {
    throw std::runtime_error("correction system is singular or ill-conditioned (cond = " +
                             format_double(system_.condition_number) +
                             "); try a larger bump radius or a different bump center");
  }
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(system_.gram);
  system_.beta = ldlt.solve(-raw.moment_vec);
  // One step of iterative refinement.
  system_.beta += ldlt.solve(-raw.moment_vec - system_.gram * system_.beta);

  // h = sum beta_j eta^2 f_j on the bump nodes.
  const Eigen::VectorXd fb = f * system_.beta;
  const Eigen::VectorXd h = eta.cwiseAbs2().cwiseProduct(fb);

  // Floor: v^{p*} + h + c_1 F >= F on the check nodes and the bump nodes.
  const double floor = system_.floor_scale;
  double min_ratio = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < count; ++i) {
    min_ratio = std::min(min_ratio, h[i] / floor);
  }
  for (Eigen::Index i = 0; i < check_rule.size(); ++i) {
    const Eigen::VectorXd x = check_rule.nodes.row(i).transpose();
    const double e = system_.bump.value(x);
    double base = std::pow(profile.v(x), ps);
    if (e > 0.0) {
      base += e * e * basis.evaluate(x).dot(system_.beta);
    }
    min_ratio = std::min(min_ratio, base / floor);
  }
  system_.floor_multiplier = 1.0;
  while (system_.floor_multiplier + min_ratio < 1.0) {
    system_.floor_multiplier *= 2.0;
  }
  const double big_c = system_.floor_constant();
  integrals_.min_floor_ratio = system_.floor_multiplier + min_ratio;

  const double sphere_area = surface_area(n.value());
  const double c_p = std::pow(big_c, p / ps);

  // Bump region.
  const Eigen::VectorXd psi_integrals = f.transpose() * w_eta2;
  double bump_p = 0.0;
  double bump_grad = 0.0;
  for (Eigen::Index i = 0; i < count; ++i) {
    const Eigen::VectorXd x = rule.nodes.row(i).transpose();
    const double g = big_c + h[i];
    bump_p += rule.weights[i] * (std::pow(g, p / ps) - c_p);
    const Eigen::MatrixXd jac = basis.jacobian(x);
    const Eigen::VectorXd grad_f = (jac.transpose() * system_.beta);
    const Eigen::VectorXd tangential_f = grad_f - grad_f.dot(x) * x;
    const Eigen::VectorXd grad_g = 2.0 * eta[i] * fb[i] * system_.bump.gradient(x) +
                                   eta[i] * eta[i] * tangential_f;
    const double grad_u = std::pow(g, 1.0 / ps - 1.0) * grad_g.norm() / ps;
    bump_grad += rule.weights[i] * std::pow(grad_u, p);
  }

  // Caps.
  const QuadratureRule cap_radial =
      radial_rule(profile.scale(), profile.delta(), options.radial);
  double cap_p = 0.0;
  double cap_grad = 0.0;
  for (Eigen::Index i = 0; i < cap_radial.size(); ++i) {
    const double r = cap_radial.nodes(i, 0);
    const double jac = cap_radial.weights[i] * std::pow(std::sin(r), n.value() - 1);
    const double vp = std::pow(profile.phi(r), ps);
    cap_p += jac * (std::pow(vp + big_c, p / ps) - c_p);
    // |grad u|^p = |phi'|^p (v^{p*} / u^{p*})^{p (p*-1) / p*}.
    cap_grad += jac * std::pow(std::abs(profile.dphi(r)), p) *
                std::pow(vp / (vp + big_c), p * (ps - 1.0) / ps);
  }
  const double caps = static_cast<double>(profile.centers().rows()) *
                      surface_area(n.value() - 1);

  integrals_.I_pstar = raw.I_pstar + system_.beta.dot(psi_integrals) + big_c * sphere_area;
  integrals_.I_p = caps * cap_p + bump_p + c_p * sphere_area;
  integrals_.I_grad = caps * cap_grad + bump_grad;
  integrals_.moment_vec = raw.moment_vec + system_.gram * system_.beta;
  integrals_.moment_residual = integrals_.moment_vec.norm() / integrals_.I_pstar;
}

double CorrectedTestFunction::u_pstar(const Eigen::VectorXd &x) const {
  const double eta = system_.bump.value(x);
  double h = 0.0;
  if (eta > 0.0) {
    h = eta * eta * basis_.evaluate(x).dot(system_.beta);
  }
  return std::pow(profile_.v(x), profile_.params().p_star()) + h + system_.floor_constant();
}

SweepResult rayleigh_sweep(const SobolevParams &params, const std::vector<double> &eps_list,
                           const BubbleOptions &options) {
  if (eps_list.empty()) {
    throw std::invalid_argument("rayleigh_sweep: empty eps list");
  }
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    if (!(eps_list[i] > 0.0) || !(eps_list[i] < options.delta)) {
      throw std::invalid_argument("rayleigh_sweep: every eps must lie in (0, delta)");
    }
    if (i > 0 && !(eps_list[i] < eps_list[i - 1])) {
      throw std::invalid_argument("rayleigh_sweep: eps list must be strictly descending");
    }
  }
  const Dimension n = params.n();
  const double tau = options.tau.value_or(BubbleProfile::default_tau(params));
  ConfigurationParams cfg;
  cfg.rotation_seed = options.rotation_seed;
  const PointSet centers = make_configuration(ConfigurationKind::simplex, n, cfg);
  const MomentBasis basis = MomentBasis::build(n, 2);
  const QuadratureRule check = global_rule(n, options);
  const LeadingCoefficients lead = leading_coefficients(params);
  const double target = rayleigh_target(params);
  const double ratio_exp = params.p() / params.p_star();

  SweepResult result;
  result.tau = tau;
  result.delta = options.delta;
  result.bump_radius = options.bump_radius;
  result.global_rule_kind = std::string(to_string(check.kind));
  result.global_rule_nodes = check.size();
  for (double eps : eps_list) {
    const BubbleProfile profile(params, eps, options.delta, tau, centers);
    const BubbleIntegrals raw = integrate_bubble(profile, basis, options);
    const CorrectedTestFunction u(profile, basis, raw, options, check);
    const CorrectedIntegrals &ci = u.integrals();
    SweepRow row;
    row.eps = eps;
    row.I_pstar = ci.I_pstar;
    row.I_p = ci.I_p;
    row.I_grad = ci.I_grad;
    row.moment_residual = ci.moment_residual;
    row.R = std::pow(ci.I_pstar, ratio_exp) / ci.I_grad;
    row.target = target;
    row.rel_err = std::abs(row.R - target) / target;
    row.raw_I_pstar = raw.I_pstar;
    row.raw_I_p = raw.I_p;
    row.raw_I_grad = raw.I_grad;
    row.raw_moment_norm = raw.moment_vec.norm();
    row.raw_moment_residual = row.raw_moment_norm / raw.I_pstar;
    row.raw_R = std::pow(raw.I_pstar, ratio_exp) / raw.I_grad;
    row.raw_rel_err = std::abs(row.raw_R - target) / target;
    row.leading_ratio = raw.I_pstar / (lead.c_num * std::pow(eps, -n.value() / params.p()));
    row.beta_max = u.system().beta.cwiseAbs().maxCoeff();
    row.floor_multiplier = u.system().floor_multiplier;
    row.min_floor_ratio = ci.min_floor_ratio;
    row.condition_number = u.system().condition_number;
    result.bump_center = u.system().bump.center;
    result.rows.push_back(row);
  }
  return result;
}

std::string sweep_to_csv(const std::vector<SweepRow> &rows) {
  std::string out = "eps,I_pstar,I_p,I_grad,moment_residual,R,target,rel_err\n";
  for (const auto &r : rows) {
    for (double v : {r.eps, r.I_pstar, r.I_p, r.I_grad, r.moment_residual, r.R, r.target}) {
      out += format_double(v);
      out += ',';
    }
    out += format_double(r.rel_err);
    out += '\n';
  }
  return out;
}

} // namespace theta_extremal
