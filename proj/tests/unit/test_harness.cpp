#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "edlab/config.hpp"
#include "edlab/experiments.hpp"
#include "edlab/report.hpp"

using namespace edlab;
using namespace edlab::harness;
namespace fs = std::filesystem;

namespace {

const char* kSmall = R"({
  "name": "small",
  "system": {"masses": [1.0]},
  "grid": {"points": [32], "lengths": [12.0]},
  "potential": {"kind": "harmonic", "omega": [1.0]},
  "initial": {"density": {"kind": "gaussian", "mean": [0.5], "sigma": [0.8]}},
  "dynamics": {"dt": 0.001, "steps": 20, "output_every": 10}
})";

std::string config_error_path(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.path();
  }
  return "";
}

std::string replace(std::string text, const std::string& from, const std::string& to) {
  text.replace(text.find(from), from.size(), to);
  return text;
}

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("edlab-test-" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run_cli(const std::string& args) {
  const char* cli = std::getenv("EDLAB_CLI");
  REQUIRE(cli != nullptr);
  const int status = std::system((std::string(cli) + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("defaults are filled in") {
  const ScenarioConfig c = parse_config(kSmall);
  CHECK(c.system.eta == 1.0);
  CHECK(c.dynamics.xi == 0.125);
  CHECK(c.k() == doctest::Approx(1.0));
  CHECK(c.hbar() == doctest::Approx(1.0));
  CHECK(c.dynamics.C == doctest::Approx(c.system.eta * c.dynamics.dt));
  CHECK(c.dynamics.discretization == hamiltonian::Discretization::amplitude);
  CHECK_FALSE(c.ensemble.has_value());
  CHECK(c.tolerances == default_tolerances());
  CHECK(c.analysis.cross_k == std::vector<double>{1.0, 2.0});
}

TEST_CASE("validation errors name the offending field") {
  CHECK(config_error_path(replace(kSmall, "[1.0]}", "[-1.0]}")) == "system.masses[0]");
  CHECK(config_error_path(replace(kSmall, "\"points\": [32]", "\"points\": [4]")) == "grid.points[0]");
  CHECK(config_error_path(replace(kSmall, "\"steps\": 20", "\"stpes\": 20")) == "dynamics.stpes");
  CHECK(config_error_path(replace(kSmall, "\"omega\": [1.0]", "\"omega\": [1.0, 2.0]")) == "potential.omega");
  CHECK(config_error_path(replace(kSmall, "\"dt\": 0.001", "\"dt\": \"fast\"")) == "dynamics.dt");
  CHECK_THROWS_AS(parse_config("{ not json"), ParseError);
}

TEST_CASE("effective config round-trips") {
  const ScenarioConfig c = parse_config(kSmall);
  const std::string dumped = to_json(c).dump();
  const ScenarioConfig again = parse_config(dumped);
  CHECK(again == c);
  CHECK(to_json(again).dump() == dumped);
}

TEST_CASE("report serialization is deterministic") {
  RunReport r;
  r.scenario = "s";
  r.experiment = "conservation";
  r.seed = 3;
  r.config = to_json(parse_config(kSmall));
  r.metrics = {{"H_drift", 1e-9, 1e-6}, {"P_drift", 2e-8, 1e-8}};
  r.artifacts = {"conservation.csv"};
  CHECK_FALSE(r.passed());
  const std::string a = emit_report(r, ReportFormat::json);
  CHECK(a == emit_report(r, ReportFormat::json));
  const auto j = nlohmann::json::parse(a);
  CHECK(j["schema_version"] == kReportSchemaVersion);
  CHECK(j["verdict"] == "fail");
  CHECK(j["metrics"][0]["verdict"] == "pass");
  CHECK(emit_report(r, ReportFormat::text) == emit_report(r, ReportFormat::text));

  r.metrics = {{"x", std::nan(""), 1.0}};
  CHECK_FALSE(r.passed());
  r.metrics.clear();
  CHECK_THROWS_AS(r.passed(), std::logic_error);
  CHECK_THROWS_AS(emit_report(r, ReportFormat::json), std::logic_error);
}

TEST_CASE("output directory precedence") {
  ScenarioConfig c = parse_config(kSmall);
  setenv("EDLAB_OUT", "from-env", 1);
  CHECK(resolve_output_directory("", c) == "from-env");
  c.output_directory = "from-config";
  CHECK(resolve_output_directory("", c) == "from-config");
  CHECK(resolve_output_directory("from-cli", c) == "from-cli");
  unsetenv("EDLAB_OUT");
  c.output_directory.clear();
  CHECK(resolve_output_directory("", c) == "edlab-out");
}

TEST_CASE("conservation experiment writes its artifacts") {
  const fs::path dir = scratch_dir("conservation");
  RunOptions o;
  o.output_directory = dir.string();
  const RunReport r = run_experiment(parse_config(kSmall), Experiment::conservation, o);
  CHECK(r.passed());
  CHECK(fs::exists(dir / "report.json"));
  CHECK(fs::exists(dir / "conservation.csv"));
  CHECK_THROWS_AS(run_experiment(parse_config(kSmall), Experiment::stochastic_vs_fp), ConfigError);
}

TEST_CASE("command line exit codes") {
  const fs::path dir = scratch_dir("cli");
  auto write = [&](const std::string& name, const std::string& text) {
    std::ofstream(dir / name) << text;
    return (dir / name).string();
  };
  const std::string good = write("good.json", kSmall);
  const std::string out = (dir / "out").string();
  CHECK(run_cli("list-experiments") == 0);
  CHECK(run_cli("validate --config " + good) == 0);
  CHECK(run_cli("run conservation --config " + good + " --out " + out + " --format json") == 0);
  CHECK(fs::exists(fs::path(out) / "report.json"));
  CHECK(run_cli("run conservation --config " + write("bad.json", "{ nope")) == 2);
  CHECK(run_cli("run conservation --config " + write("neg.json", replace(kSmall, "[1.0]}", "[-1.0]}"))) == 3);
  CHECK(run_cli("run no-such-experiment --config " + good + " --out " + out) == 3);
  const std::string strict = replace(
      kSmall, "\"output_every\": 10}", "\"output_every\": 10}, \"tolerances\": {\"H_drift\": 0, \"norm_drift\": 0, \"P_drift\": 0}");
  CHECK(run_cli("run conservation --config " + write("strict.json", strict) + " --out " + out) == 5);
  CHECK(run_cli("run conservation") != 0);
}
