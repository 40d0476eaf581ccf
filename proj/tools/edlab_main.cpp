#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "edlab/config.hpp"
#include "edlab/errors.hpp"
#include "edlab/experiments.hpp"
#include "edlab/report.hpp"

namespace {

enum ExitCode { kOk = 0, kInternal = 1, kParse = 2, kValidation = 3, kDivergence = 4, kTolerance = 5 };

}  // namespace

int main(int argc, char** argv) {
  using namespace edlab::harness;

  CLI::App app{"edlab: ensemble dynamics experiments"};
  app.require_subcommand(1);

  std::string experiment, config_path, out_dir, format = "text";
  std::uint64_t seed = 0;

  CLI::App* run = app.add_subcommand("run", "Run one experiment on a scenario");
  run->add_option("experiment", experiment, "Experiment name (see list-experiments)")->required();
  run->add_option("--config", config_path, "Scenario JSON file")->required();
  run->add_option("--out", out_dir, "Output directory (fallback: config outputs.directory, then $EDLAB_OUT)");
  CLI::Option* seed_opt = run->add_option("--seed", seed, "Master seed, replaces ensemble.master_seed");
  run->add_option("--format", format, "Report format printed on stdout")->check(CLI::IsMember({"json", "text"}));

  CLI::App* validate = app.add_subcommand("validate", "Check a scenario and print the effective config");
  validate->add_option("--config", config_path, "Scenario JSON file")->required();

  CLI::App* list = app.add_subcommand("list-experiments", "Print the experiment names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  if (list->parsed()) {
    for (const auto& name : experiment_names()) std::cout << name << '\n';
    return kOk;
  }

  try {
    const ScenarioConfig config = load_config(config_path);
    if (validate->parsed()) {
      std::cout << to_json(config).dump(2) << '\n';
      return kOk;
    }

    Experiment which;
    try {
      which = experiment_from_string(experiment);
    } catch (const std::invalid_argument& e) {
      std::cerr << "error: " << e.what() << '\n';
      return kValidation;
    }
    RunOptions options;
    options.output_directory = resolve_output_directory(out_dir, config);
    if (seed_opt->count() > 0) options.seed = seed;
    const RunReport report = run_experiment(config, which, options);
    std::cout << emit_report(report, report_format_from_string(format));
    return report.passed() ? kOk : kTolerance;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kParse;
  } catch (const ConfigError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kValidation;
  } catch (const edlab::DivergenceError& e) {
    std::cerr << "divergence: " << e.what() << '\n';
    return kDivergence;
  } catch (const edlab::UnderResolvedError& e) {
    std::cerr << "divergence: " << e.what() << '\n';
    return kDivergence;
  } catch (const std::invalid_argument& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInternal;
  }
}
