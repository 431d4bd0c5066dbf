#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "polytherm/errors.hpp"

namespace {

int read_thread_cap() {
  const char* env = std::getenv("POLYTHERM_THREADS");
  if (env == nullptr) return 1;
  try {
    const int n = std::stoi(env);
    if (n < 1) throw polytherm::ConfigError("POLYTHERM_THREADS must be >= 1");
    return n;
  } catch (const std::invalid_argument&) {
    throw polytherm::ConfigError("POLYTHERM_THREADS is not a number");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"polytherm: adiabatic thermoelasticity solver and diagnostics lab"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  bool seed_given = false;

  const auto add_common = [&](CLI::App* sub, bool config_required) {
    auto* opt = sub->add_option("--config", config_path, "experiment configuration file");
    if (config_required) opt->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed, "override the sampling seed")
        ->each([&](const std::string&) { seed_given = true; });
  };

  auto* simulate = app.add_subcommand("simulate", "run the viscous solver and store diagnostics");
  auto* compare = app.add_subcommand("compare", "weak-strong comparison with Gronwall envelope");
  auto* bounds = app.add_subcommand("bounds", "empirical stability-bound certificates");
  auto* weaklab = app.add_subcommand("weaklab", "weak-limit and concentration experiments");
  auto* check = app.add_subcommand("check", "cross-module invariant suite at small sizes");
  for (auto* sub : {simulate, compare, bounds, weaklab}) add_common(sub, true);
  add_common(check, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  try {
    polytherm::cli::CommandArgs args;
    args.config = config_path.empty() ? polytherm::Config::parse_string("")
                                      : polytherm::Config::parse_file(config_path);
    args.out_dir = out_dir;
    args.seed = seed_given ? seed : args.config.get_u64("experiment", "seed", 42);
    args.threads = read_thread_cap();

    if (simulate->parsed()) return polytherm::cli::cmd_simulate(args);
    if (compare->parsed()) return polytherm::cli::cmd_compare(args);
    if (bounds->parsed()) return polytherm::cli::cmd_bounds(args);
    if (weaklab->parsed()) return polytherm::cli::cmd_weaklab(args);
    return polytherm::cli::cmd_check(args);
  } catch (const polytherm::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const polytherm::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const polytherm::LipschitzError& e) {
    std::cerr << "smoothness lost: " << e.what() << "\n";
    return 4;
  } catch (const polytherm::SamplingError& e) {
    std::cerr << "degenerate sampling: " << e.what() << "\n";
    return 5;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
