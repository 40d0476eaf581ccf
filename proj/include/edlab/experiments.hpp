#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "edlab/config.hpp"
#include "edlab/hamiltonian.hpp"
#include "edlab/report.hpp"

namespace edlab::harness {

enum class Experiment { equivalence, stochastic_vs_fp, conservation, scaling_sweep, infogeo, regraduation, winding };

/// CLI names in a fixed order.
const std::vector<std::string>& experiment_names();
std::string to_string(Experiment e);
/// Throws std::invalid_argument for an unknown name.
Experiment experiment_from_string(const std::string& name);

struct RunOptions {
  /// Artifacts and report.json go here; empty writes nothing.
  std::string output_directory;
  /// Replaces ensemble.master_seed (and the Monte Carlo seed) when set.
  std::optional<std::uint64_t> seed;
};

Grid build_grid(const ScenarioConfig& config);
ParticleSystem build_system(const ScenarioConfig& config);
/// Normalized density and action-units phase from the `initial` section. A
/// plane-wave phase is angular with period 2 pi eta / k.
hamiltonian::CanonicalState initial_state(const ScenarioConfig& config);
hamiltonian::Model build_model(const ScenarioConfig& config);

/// Runs one experiment, writes its artifacts and returns the report.
/// Throws ConfigError when the scenario lacks something the experiment needs,
/// DivergenceError / UnderResolvedError from the numerics.
RunReport run_experiment(const ScenarioConfig& config, Experiment experiment, const RunOptions& options = {});

/// Order of precedence: explicit --out, the config's outputs.directory, $EDLAB_OUT, "edlab-out".
std::string resolve_output_directory(const std::string& cli_value, const ScenarioConfig& config);

}  // namespace edlab::harness
