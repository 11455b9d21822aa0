#include "cli_commands.hpp"

#include "theta_extremal/bubble.hpp"
#include "theta_extremal/measure.hpp"
#include "theta_extremal/measure_io.hpp"
#include "theta_extremal/moment_basis.hpp"
#include "theta_extremal/report.hpp"
#include "theta_extremal/sobolev.hpp"
#include "theta_extremal/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace cli {

namespace te = theta_extremal;
using te::Json;

namespace {

std::string trim(const std::string &s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) {
    return "";
  }
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

class Stopwatch {
public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// Echo of every option of a subcommand, in declaration order.
Json config_echo(const CLI::App &cmd) {
  Json echo = Json::object();
  for (const CLI::Option *opt : cmd.get_options()) {
    const std::string name = opt->get_single_name();
    if (name.empty() || name == "help" || name == "config") {
      continue;
    }
    if (opt->count() > 0) {
      const auto values = opt->results();
      if (values.size() == 1) {
        echo[name] = values.front();
      } else {
        echo[name] = values;
      }
    } else if (!opt->get_default_str().empty()) {
      echo[name] = opt->get_default_str();
    } else {
      echo[name] = nullptr;
    }
  }
  return echo;
}

// Common report header: command, version, seed, config echo, then the timing
// fields that legitimately differ between runs.
Json report_header(const std::string &command, const CLI::App &cmd,
                   std::optional<std::uint64_t> seed) {
  Json doc;
  doc["command"] = command;
  doc["version"] = te::library_version();
  doc["seed"] = seed ? Json(*seed) : Json(nullptr);
  doc["config"] = config_echo(cmd);
  doc["timestamp"] = utc_timestamp();
  doc["wall_clock_seconds"] = 0.0;
  return doc;
}

void write_report(const std::string &path, Json &doc, const Stopwatch &watch) {
  doc["wall_clock_seconds"] = watch.seconds();
  if (!path.empty()) {
    te::write_file_atomic(path, te::dump_json(doc));
  }
}

std::string short_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::string short_scientific(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.3e", v);
  return buf;
}

std::vector<double> parse_eps_list(const std::string &text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) {
      continue;
    }
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(item, &used);
    } catch (const std::exception &) {
      used = 0;
    }
    if (used != item.size()) {
      throw std::invalid_argument("--eps: cannot parse \"" + item + "\"");
    }
    out.push_back(value);
  }
  if (out.empty()) {
    throw std::invalid_argument("--eps: empty list");
  }
  return out;
}

// ---------------------------------------------------------------- theta

struct SolveOptions {
  int n = 0;
  int m = 0;
  double theta = 0.0;
  int support = 0;
  te::SolverConfig solver;
  std::string output = "theta-solve.json";
  std::string sweep_csv;
};

void run_theta_solve(const CLI::App &cmd, const SolveOptions &o, int &exit_code) {
  const Stopwatch watch;
  const te::Dimension n(o.n);
  if (o.m < 1) {
    throw std::invalid_argument("--m must be >= 1");
  }
  if (!(o.theta > 0.0 && o.theta < 1.0)) {
    throw std::invalid_argument("--theta must lie in (0, 1)");
  }
  const int minimal = te::minimal_support(n, o.m);
  std::vector<int> sizes;
  if (o.support > 0) {
    sizes.push_back(o.support);
  } else {
    // Equality cases sit at the low end; high degrees need room above the minimum.
    for (int s = minimal; s <= std::max(2 * (o.n + 2), minimal + o.n + 2); ++s) {
      sizes.push_back(s);
    }
  }
  te::SolverConfig config = o.solver;
  config.support_size = sizes.front();
  config.validate();
  // Fails early (exit 2) when the requested support is infeasible.
  if (sizes.front() < minimal) {
    te::minimize_theta(n, o.m, o.theta, config);
  }

  std::optional<te::OptimizerReport> best;
  Json sweep = Json::array();
  std::string csv = "n,m,theta,N,energy,residual,closed_form,gap,converged,support\n";
  for (int size : sizes) {
    config.support_size = size;
    te::OptimizerReport report = te::minimize_theta(n, o.m, o.theta, config);
    Json row;
    row["N"] = size;
    row["energy"] = report.energy;
    row["residual_norm"] = report.residual_norm;
    row["converged"] = report.converged;
    row["support"] = report.best_measure.size();
    sweep.push_back(row);
    csv += std::to_string(o.n) + "," + std::to_string(o.m) + "," + te::format_double(o.theta) +
           "," + std::to_string(size) + "," + te::format_double(report.energy) + "," +
           te::format_double(report.residual_norm) + "," +
           (report.closed_form ? te::format_double(*report.closed_form) : "") + "," +
           (report.gap ? te::format_double(*report.gap) : "") + "," +
           (report.converged ? "true" : "false") + "," +
           std::to_string(report.best_measure.size()) + "\n";
    const bool better =
        !best || (report.converged && !best->converged) ||
        (report.converged == best->converged &&
         (report.converged ? report.energy < best->energy - 1e-12
                           : report.residual_norm < best->residual_norm));
    if (better) {
      best = std::move(report);
    }
  }

  Json doc = report_header("theta solve", cmd, config.seed);
  doc["conjectural"] = !best->closed_form.has_value();
  doc["result"] = te::report_to_json(*best);
  if (sizes.size() > 1) {
    doc["support_sweep"] = sweep;
  }
  write_report(o.output, doc, watch);
  if (!o.sweep_csv.empty()) {
    te::write_file_atomic(o.sweep_csv, csv);
  }

  std::cout << "theta(" << o.m << "," << short_number(o.theta) << "," << o.n
            << ") ≤ " << short_number(best->energy) << " (closed form "
            << (best->closed_form ? short_number(*best->closed_form) : "unknown")
            << ", gap " << (best->gap ? short_scientific(*best->gap) : "n/a")
            << ", residual " << short_scientific(best->residual_norm) << ")";
  if (!best->converged) {
    std::cout << " NOT CONVERGED";
  }
  std::cout << "\n";
  exit_code = best->converged ? kSuccess : kNotConverged;
}

void add_theta(CLI::App &app, int &exit_code) {
  CLI::App *theta = app.add_subcommand("theta", "Theta(m, theta, n) solver and oracles");
  theta->require_subcommand(1);

  auto solve_opts = std::make_shared<SolveOptions>();
  CLI::App *solve = theta->add_subcommand("solve", "Minimize sum nu_i^theta over moment-vanishing measures");
  solve->add_option("--n", solve_opts->n, "Sphere dimension")->required()->check(CLI::PositiveNumber);
  solve->add_option("--m", solve_opts->m, "Moment degree")->required()->check(CLI::PositiveNumber);
  solve->add_option("--theta", solve_opts->theta, "Exponent in (0, 1)")->required();
  solve->add_option("--support", solve_opts->support,
                    "Support size N; 0 sweeps N upward from the minimum")
      ->capture_default_str();
  solve->add_option("--restarts", solve_opts->solver.restarts, "Random restarts")->capture_default_str();
  solve->add_option("--seed", solve_opts->solver.seed, "RNG seed")->capture_default_str();
  solve->add_option("--max-outer", solve_opts->solver.max_outer_iters, "Penalty rounds")->capture_default_str();
  solve->add_option("--max-inner", solve_opts->solver.max_inner_iters, "Steps per round")->capture_default_str();
  solve->add_option("--penalty-init", solve_opts->solver.penalty_init, "Initial penalty")->capture_default_str();
  solve->add_option("--penalty-growth", solve_opts->solver.penalty_growth, "Penalty factor")->capture_default_str();
  solve->add_option("--step-size", solve_opts->solver.step_size, "Initial step parameter")->capture_default_str();
  solve->add_option("--grad-tol", solve_opts->solver.grad_tol, "Relative decrease tolerance")->capture_default_str();
  solve->add_option("--residual-tol", solve_opts->solver.residual_tol, "Feasibility tolerance")->capture_default_str();
  solve->add_option("--threads", solve_opts->solver.threads, "Worker threads (0 = auto)")->capture_default_str();
  solve->add_option("--output", solve_opts->output, "Report JSON path")->capture_default_str();
  solve->add_option("--sweep-csv", solve_opts->sweep_csv, "Optional per-N CSV table");
  solve->callback([solve, solve_opts, &exit_code] { run_theta_solve(*solve, *solve_opts, exit_code); });

  struct BruteOptions {
    double theta = 0.0;
    int max_support = 3;
    int grid_steps = 100;
    std::string output;
  };
  auto brute_opts = std::make_shared<BruteOptions>();
  CLI::App *brute = theta->add_subcommand("bruteforce", "Grid oracle for m = 1");
  brute->add_option("--theta", brute_opts->theta, "Exponent in (0, 1)")->required();
  brute->add_option("--max-support", brute_opts->max_support, "At most 5")->capture_default_str();
  brute->add_option("--grid-steps", brute_opts->grid_steps, "At most 200")->capture_default_str();
  brute->add_option("--output", brute_opts->output, "Optional report JSON path");
  brute->callback([brute, brute_opts, &exit_code] {
    const Stopwatch watch;
    const double value =
        te::bruteforce_theta_m1(brute_opts->theta, brute_opts->max_support, brute_opts->grid_steps);
    const double closed = std::pow(2.0, 1.0 - brute_opts->theta);
    Json doc = report_header("theta bruteforce", *brute, std::nullopt);
    doc["value"] = value;
    doc["closed_form"] = closed;
    doc["difference"] = value - closed;
    write_report(brute_opts->output, doc, watch);
    std::cout << "bruteforce theta(1," << short_number(brute_opts->theta) << ") = "
              << short_number(value) << " (closed form " << short_number(closed) << ")\n";
    exit_code = kSuccess;
  });

  struct ClosedOptions {
    int n = 0;
    int m = 0;
    double theta = 0.0;
  };
  auto closed_opts = std::make_shared<ClosedOptions>();
  CLI::App *closed = theta->add_subcommand("closed-form", "Known closed forms of Theta");
  closed->add_option("--n", closed_opts->n, "Sphere dimension")->required()->check(CLI::PositiveNumber);
  closed->add_option("--m", closed_opts->m, "Moment degree")->required()->check(CLI::PositiveNumber);
  closed->add_option("--theta", closed_opts->theta, "Exponent in (0, 1)")->required();
  closed->callback([closed_opts, &exit_code] {
    const auto value = te::closed_form_theta(closed_opts->m, closed_opts->theta,
                                             te::Dimension(closed_opts->n));
    std::cout << "theta(" << closed_opts->m << "," << short_number(closed_opts->theta) << ","
              << closed_opts->n << ") = "
              << (value ? te::format_double(*value) : std::string("unknown")) << "\n";
    exit_code = kSuccess;
  });
}

// ---------------------------------------------------------------- certify

void add_certify(CLI::App &app, int &exit_code) {
  struct CertifyOptions {
    std::string measure;
    int m = 2;
    double theta = 0.5;
    double tol = 1e-6;
    std::string output;
  };
  auto o = std::make_shared<CertifyOptions>();
  CLI::App *cmd = app.add_subcommand("certify", "Orthonormality certificate for a measure file");
  cmd->add_option("--measure", o->measure, "Measure JSON {n, points, weights}")->required();
  cmd->add_option("--m", o->m, "Moment degree (2, or any m on S^1)")->capture_default_str();
  cmd->add_option("--theta", o->theta, "Exponent for the lower bound")->capture_default_str();
  cmd->add_option("--tol", o->tol, "Certificate tolerance")->capture_default_str();
  cmd->add_option("--output", o->output, "Optional report JSON path");
  cmd->callback([cmd, o, &exit_code] {
    const Stopwatch watch;
    const te::DiscreteMeasure measure = te::read_measure_file(o->measure);
    const int n = measure.dimension().value();
    if (!(o->theta > 0.0 && o->theta < 1.0)) {
      throw std::invalid_argument("--theta must lie in (0, 1)");
    }
    Json doc = report_header("certify", *cmd, std::nullopt);
    const te::Feasibility feas = te::is_feasible(measure, o->m, 1e-8);
    doc["moment_residual"] = feas.residual_norm;
    doc["energy"] = te::theta_energy(measure, o->theta);
    Json sums = Json::array();
    if (n == 1) {
      const te::CircleCertificate c = te::circle_certificate(measure, o->m, o->theta, o->tol);
      doc["kind"] = "circle";
      doc["max_unitarity_deviation"] = c.max_unitarity_deviation;
      for (double s : c.parseval_sums) {
        sums.push_back(s);
      }
      doc["parseval_sums"] = sums;
      doc["nominal_lower_bound"] = c.nominal_lower_bound;
      doc["certified_lower_bound"] = c.certified_lower_bound;
      doc["applicable"] = c.applicable;
      doc["reason"] = c.reason;
      std::cout << "unitarity deviation " << short_scientific(c.max_unitarity_deviation);
      if (c.applicable) {
        std::cout << "; lower bound " << short_number(c.certified_lower_bound)
                  << " certified (nominal " << short_number(c.nominal_lower_bound) << ")\n";
      } else {
        std::cout << "; certificate refused: " << c.reason << "\n";
      }
    } else if (o->m == 2) {
      const te::GramCertificate c = te::gram_certificate_m2(measure, o->theta, o->tol);
      doc["kind"] = "gram_m2";
      doc["max_orthonormality_deviation"] = c.max_orthonormality_deviation;
      for (double s : c.parseval_sums) {
        sums.push_back(s);
      }
      doc["parseval_sums"] = sums;
      doc["nominal_lower_bound"] = c.nominal_lower_bound;
      doc["certified_lower_bound"] = c.certified_lower_bound;
      doc["slack"] = c.slack;
      doc["applicable"] = c.applicable;
      doc["reason"] = c.reason;
      std::cout << "orthonormality deviation " << short_scientific(c.max_orthonormality_deviation)
                << "; max Parseval sum "
                << short_number(c.parseval_sums.size() ? c.parseval_sums.maxCoeff() : 0.0);
      if (c.applicable) {
        std::cout << "; lower bound " << short_number(c.certified_lower_bound)
                  << " certified (nominal " << short_number(c.nominal_lower_bound) << ")\n";
      } else {
        std::cout << "; certificate refused: " << c.reason << "\n";
      }
    } else {
      throw std::invalid_argument("certificates exist for m = 2, or for any m on S^1");
    }
    write_report(o->output, doc, watch);
    exit_code = kSuccess;
  });
}

// ---------------------------------------------------------------- const

void add_constants(CLI::App &app, int &exit_code) {
  CLI::App *cmd = app.add_subcommand("const", "Sharp and improved Sobolev constants");
  cmd->require_subcommand(1);

  struct ConstOptions {
    int n = 0;
    double p = 0.0;
    int m = 2;
    std::string output;
  };
  auto sob = std::make_shared<ConstOptions>();
  CLI::App *sobolev = cmd->add_subcommand("sobolev", "S_{n,p}");
  sobolev->add_option("--n", sob->n, "Dimension")->required()->check(CLI::PositiveNumber);
  sobolev->add_option("--p", sob->p, "Exponent, 1 < p < n")->required();
  sobolev->add_option("--output", sob->output, "Optional report JSON path");
  sobolev->callback([sobolev, sob, &exit_code] {
    const Stopwatch watch;
    const te::SobolevParams params(te::Dimension(sob->n), sob->p);
    const double s = te::sharp_sobolev(params);
    Json doc = report_header("const sobolev", *sobolev, std::nullopt);
    doc["S"] = s;
    doc["S_pow_p"] = std::pow(s, sob->p);
    std::cout << "S(" << sob->n << "," << short_number(sob->p) << ") = " << te::format_double(s);
    if (sob->p == 2.0 && sob->n >= 3) {
      const double reduced = te::sharp_sobolev_p2_squared(te::Dimension(sob->n));
      const double delta = std::abs(s * s - reduced) / reduced;
      doc["p2_reduction_relative_delta"] = delta;
      std::cout << "  (p = 2 cross-check: relative delta " << short_scientific(delta) << ")";
    }
    std::cout << "\n";
    doc["odd_order_constant"] = te::odd_order_constant_definition();
    write_report(sob->output, doc, watch);
    exit_code = kSuccess;
  });

  auto bih = std::make_shared<ConstOptions>();
  CLI::App *biharmonic = cmd->add_subcommand("biharmonic", "Second-order sharp constant, n >= 5");
  biharmonic->add_option("--n", bih->n, "Dimension")->required()->check(CLI::PositiveNumber);
  biharmonic->add_option("--output", bih->output, "Optional report JSON path");
  biharmonic->callback([biharmonic, bih, &exit_code] {
    const Stopwatch watch;
    const double s = te::sharp_biharmonic(te::Dimension(bih->n));
    Json doc = report_header("const biharmonic", *biharmonic, std::nullopt);
    doc["S"] = s;
    write_report(bih->output, doc, watch);
    std::cout << "S_biharmonic(" << bih->n << ") = " << te::format_double(s) << "\n";
    exit_code = kSuccess;
  });

  auto imp = std::make_shared<ConstOptions>();
  CLI::App *improved = cmd->add_subcommand("improved", "S_{n,p}^p / Theta(m, (n-p)/n, n)");
  improved->add_option("--n", imp->n, "Dimension")->required()->check(CLI::PositiveNumber);
  improved->add_option("--p", imp->p, "Exponent, 1 < p < n")->required();
  improved->add_option("--m", imp->m, "Moment degree")->capture_default_str()->check(CLI::PositiveNumber);
  improved->add_option("--output", imp->output, "Optional report JSON path");
  improved->callback([improved, imp, &exit_code] {
    const Stopwatch watch;
    const te::SobolevParams params(te::Dimension(imp->n), imp->p);
    const double value = te::improved_constant(params, imp->m);
    Json doc = report_header("const improved", *improved, std::nullopt);
    doc["value"] = value;
    doc["theta"] = params.theta();
    write_report(imp->output, doc, watch);
    std::cout << "improved(" << imp->n << "," << short_number(imp->p) << ", m=" << imp->m
              << ") = " << te::format_double(value) << "\n";
    exit_code = kSuccess;
  });
}

// ---------------------------------------------------------------- bubble

void add_bubble(CLI::App &app, int &exit_code) {
  CLI::App *cmd = app.add_subcommand("bubble", "Truncated-bubble test family");
  cmd->require_subcommand(1);

  struct SweepOptions {
    int n = 0;
    double p = 0.0;
    std::string eps = "1e-2,1e-3,1e-4";
    te::BubbleOptions bubble;
    double tau = 0.0;
    std::string output;
  };
  auto o = std::make_shared<SweepOptions>();
  CLI::App *sweep = cmd->add_subcommand("sweep", "Rayleigh quotients of the corrected bubbles");
  sweep->add_option("--n", o->n, "Dimension (2 or 3)")->required()->check(CLI::PositiveNumber);
  sweep->add_option("--p", o->p, "Exponent, 1 < p < n")->required();
  sweep->add_option("--eps", o->eps, "Comma-separated, strictly descending")->capture_default_str();
  sweep->add_option("--delta", o->bubble.delta, "Cap half-radius")->capture_default_str();
  sweep->add_option("--tau", o->tau, "0 selects 0.9 min{n/p, 2/p', p*/p'}")->capture_default_str();
  sweep->add_option("--bump-radius", o->bubble.bump_radius, "Correction bump radius")->capture_default_str();
  sweep->add_option("--seed", o->bubble.seed, "Seed for the Monte Carlo check rule")->capture_default_str();
  sweep->add_option("--output", o->output, "CSV path (stdout when omitted)");
  sweep->callback([sweep, o, &exit_code] {
    const Stopwatch watch;
    if (o->n != 2 && o->n != 3) {
      throw std::invalid_argument("bubble sweep supports n = 2 and n = 3; use "
                                  "`bubble identity-check` for higher n");
    }
    const te::SobolevParams params(te::Dimension(o->n), o->p);
    te::BubbleOptions options = o->bubble;
    if (o->tau > 0.0) {
      options.tau = o->tau;
    }
    const std::vector<double> eps = parse_eps_list(o->eps);
    const te::SweepResult result = te::rayleigh_sweep(params, eps, options);
    const std::string csv = te::sweep_to_csv(result.rows);
    if (o->output.empty()) {
      std::cout << csv;
    } else {
      te::write_file_atomic(o->output, csv);
      Json doc = report_header("bubble sweep", *sweep, options.seed);
      doc["tau"] = result.tau;
      doc["delta"] = result.delta;
      doc["bump_radius"] = result.bump_radius;
      doc["bump_center"] = std::vector<double>(result.bump_center.data(),
                                               result.bump_center.data() +
                                                   result.bump_center.size());
      doc["check_rule"] = result.global_rule_kind;
      doc["check_rule_nodes"] = result.global_rule_nodes;
      Json rows = Json::array();
      for (const auto &r : result.rows) {
        Json row;
        row["eps"] = r.eps;
        row["uncorrected_I_pstar"] = r.raw_I_pstar;
        row["uncorrected_I_grad"] = r.raw_I_grad;
        row["uncorrected_moment_norm"] = r.raw_moment_norm;
        row["uncorrected_R"] = r.raw_R;
        row["uncorrected_rel_err"] = r.raw_rel_err;
        row["leading_ratio"] = r.leading_ratio;
        row["beta_max"] = r.beta_max;
        row["floor_multiplier"] = r.floor_multiplier;
        row["min_floor_ratio"] = r.min_floor_ratio;
        row["condition_number"] = r.condition_number;
        rows.push_back(row);
      }
      doc["rows"] = rows;
      write_report(o->output + ".json", doc, watch);
      for (const auto &r : result.rows) {
        std::cout << "eps " << short_number(r.eps) << ": R " << short_number(r.R) << ", target "
                  << short_number(r.target) << ", rel_err " << short_number(r.rel_err) << "\n";
      }
    }
    exit_code = kSuccess;
  });

  struct IdentityOptions {
    int n = 0;
    double p = 0.0;
  };
  auto io = std::make_shared<IdentityOptions>();
  CLI::App *identity = cmd->add_subcommand("identity-check", "Limit ratio vs (n+2)^{-p/n} S^p");
  identity->add_option("--n", io->n, "Dimension")->required()->check(CLI::PositiveNumber);
  identity->add_option("--p", io->p, "Exponent, 1 < p < n")->required();
  identity->callback([io, &exit_code] {
    const te::SobolevParams params(te::Dimension(io->n), io->p);
    const te::LeadingCoefficients c = te::leading_coefficients(params);
    std::cout << "c_num " << te::format_double(c.c_num) << "\nc_grad "
              << te::format_double(c.c_grad) << "\nlimit_ratio "
              << te::format_double(c.limit_ratio) << "\ntarget "
              << te::format_double(te::rayleigh_target(params)) << "\ndiscrepancy "
              << te::format_double(te::identity_discrepancy(params)) << "\n";
    exit_code = kSuccess;
  });
}

// ---------------------------------------------------------------- config

void collect_schema(const CLI::App &node, const std::string &prefix, Json &out) {
  const auto subs = node.get_subcommands([](const CLI::App *) { return true; });
  if (subs.empty()) {
    Json options = Json::object();
    for (const CLI::Option *opt : node.get_options()) {
      const std::string name = opt->get_single_name();
      if (name.empty() || name == "help") {
        continue;
      }
      Json entry;
      entry["type"] = opt->get_type_name();
      entry["required"] = opt->get_required();
      entry["default"] = opt->get_default_str().empty() ? Json(nullptr)
                                                         : Json(opt->get_default_str());
      entry["description"] = opt->get_description();
      options[name] = entry;
    }
    out[prefix] = options;
    return;
  }
  for (const CLI::App *sub : subs) {
    collect_schema(*sub, prefix.empty() ? sub->get_name() : prefix + " " + sub->get_name(),
                   out);
  }
}

void add_config(CLI::App &app, int &exit_code) {
  CLI::App *cmd = app.add_subcommand("config", "Configuration helpers");
  cmd->require_subcommand(1);
  CLI::App *schema = cmd->add_subcommand("print-schema", "Print every command's keys as JSON");
  schema->callback([&app, &exit_code] {
    Json out = Json::object();
    for (const CLI::App *sub : app.get_subcommands([](const CLI::App *) { return true; })) {
      if (sub->get_name() == "config") {
        continue;
      }
      collect_schema(*sub, sub->get_name(), out);
    }
    Json doc;
    doc["version"] = te::library_version();
    doc["config_file"] = "key = value lines (keys as in the flags, without dashes); "
                         "'#' starts a comment; flags on the command line win";
    doc["commands"] = out;
    std::cout << te::dump_json(doc);
    exit_code = kSuccess;
  });
}

} // namespace

std::vector<std::string> merge_config_file(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i),
                 args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
      break;
    }
  }
  if (path.empty()) {
    return args;
  }
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("cannot open config file " + path);
  }
  auto given = [&args](const std::string &flag) {
    return std::any_of(args.begin(), args.end(), [&](const std::string &a) {
      return a == flag || a.rfind(flag + "=", 0) == 0;
    });
  };
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) {
      line.erase(hash);
    }
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument(path + ":" + std::to_string(number) +
                                  ": expected key = value");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    while (!key.empty() && key.front() == '-') {
      key.erase(0, 1);
    }
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    if (key.empty()) {
      throw std::invalid_argument(path + ":" + std::to_string(number) + ": empty key");
    }
    const std::string flag = "--" + key;
    if (!given(flag)) {
      args.push_back(flag);
      args.push_back(value);
    }
  }
  return args;
}

void register_commands(CLI::App &app, int &exit_code) {
  add_theta(app, exit_code);
  add_certify(app, exit_code);
  add_constants(app, exit_code);
  add_bubble(app, exit_code);
  add_config(app, exit_code);
}

} // namespace cli
