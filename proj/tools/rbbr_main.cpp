// Command-line front end over the C API.
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rbbr/rbbr.h"

namespace {

struct Options {
  std::string scenario;
  std::string out = ".";
  std::optional<std::uint64_t> seed;
  bool quiet = false;
  std::optional<std::string> initial;
  std::size_t starts = 0;
  std::string suite = "all";
  std::vector<double> eps;
};

int report_failure(rbbr_status s) {
  std::cerr << "rbbr: " << rbbr_last_error() << "\n";
  return s == RBBR_CONFIG_ERROR || s == RBBR_INVALID_ARGUMENT ? 2 : 3;
}

int run(const std::string& command, const Options& opt) {
  rbbr_scenario* sc = nullptr;
  rbbr_status s = rbbr_scenario_load_file(opt.scenario.c_str(), &sc);
  if (s != RBBR_OK) return report_failure(s);
  if (opt.seed) rbbr_scenario_set_seed(sc, *opt.seed);

  rbbr_result* res = nullptr;
  if (command == "simulate") s = rbbr_simulate(sc, opt.initial ? opt.initial->c_str() : nullptr, &res);
  else if (command == "equilibrium") s = rbbr_equilibrium(sc, opt.starts, &res);
  else if (command == "check") s = rbbr_check(sc, opt.suite.c_str(), &res);
  else s = rbbr_sweep(sc, opt.eps.empty() ? nullptr : opt.eps.data(), opt.eps.size(), &res);
  rbbr_scenario_free(sc);
  if (s != RBBR_OK && s != RBBR_PROPERTY_FAILED) return report_failure(s);

  const int code = rbbr_result_exit_code(res);
  const rbbr_status w = rbbr_result_write(res, opt.out.c_str());
  if (w != RBBR_OK) {
    rbbr_result_free(res);
    return report_failure(w);
  }
  if (!opt.quiet) {
    std::cout << command << ": " << rbbr_result_summary(res) << "\n";
    for (std::size_t i = 0; i < rbbr_result_file_count(res); ++i)
      std::cout << "  wrote " << opt.out << "/" << rbbr_result_file_name(res, i) << "\n";
  }
  if (code != 0) std::cerr << "rbbr: property check failed (see report)\n";
  rbbr_result_free(res);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regularized Bayesian best response dynamics"};
  app.require_subcommand(1);
  Options opt;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--scenario", opt.scenario, "Scenario JSON file")->required();
    sub->add_option("--out", opt.out, "Output directory");
    sub->add_option("--seed", opt.seed, "Seed (overrides the file)");
    sub->add_flag("--quiet", opt.quiet, "No summary on standard output");
  };
  CLI::App* simulate = app.add_subcommand("simulate", "Integrate the dynamic and write the trajectory");
  common(simulate);
  simulate->add_option("--initial", opt.initial, "seed | uniform | vertex:<k> (default: scenario)");
  CLI::App* equilibrium = app.add_subcommand("equilibrium", "Solve for equilibria from several starts");
  common(equilibrium);
  equilibrium->add_option("--starts", opt.starts, "Number of starts (default: scenario)")->check(CLI::PositiveNumber);
  CLI::App* check = app.add_subcommand("check", "Run a property suite");
  common(check);
  check->add_option("--suite", opt.suite, "regularizers | dynamics | potential | nsd | all")
      ->check(CLI::IsMember({"regularizers", "dynamics", "potential", "nsd", "all"}));
  CLI::App* sweep = app.add_subcommand("sweep", "Solve along a list of noise levels");
  common(sweep);
  sweep->add_option("--eps", opt.eps, "Noise levels, comma separated (default: scenario)")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  for (CLI::App* sub : {simulate, equilibrium, check, sweep})
    if (sub->parsed()) return run(sub->get_name(), opt);
  return 2;
}
