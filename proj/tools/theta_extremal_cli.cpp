#include "cli_commands.hpp"

#include <exception>
#include <iostream>
#include <stdexcept>

int main(int argc, char **argv) {
  CLI::App app{"Moment-constrained theta-energy solver, certificates, Sobolev constants "
               "and bubble sweeps",
               "theta-extremal"};
  app.require_subcommand(1);
  int exit_code = cli::kSuccess;
  cli::register_commands(app, exit_code);

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    args = cli::merge_config_file(std::move(args));
    // CLI11 wants the arguments in reverse order.
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp &e) {
    app.exit(e);
    return cli::kSuccess;
  } catch (const CLI::CallForAllHelp &e) {
    app.exit(e);
    return cli::kSuccess;
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return cli::kUsage;
  } catch (const std::invalid_argument &e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kUsage;
  } catch (const std::domain_error &e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kUsage;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kNotConverged;
  }
  return exit_code;
}
