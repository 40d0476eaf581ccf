#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "edlab/calculus.hpp"
#include "edlab/errors.hpp"
#include "edlab/hamiltonian.hpp"
#include "edlab/potential.hpp"

/// Scenario files: JSON with strict key checking, defaults applied on load.
namespace edlab::harness {

/// The text is not valid JSON (exit code 2).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Valid JSON that does not describe a usable scenario (exit code 3).
/// `path()` names the offending field, e.g. `system.masses[0]`.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& path, const std::string& message)
      : Error(path + ": " + message), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

struct SystemSpec {
  std::vector<double> masses;
  double eta = 1.0;
  std::size_t spatial_dim = 1;
  bool operator==(const SystemSpec&) const = default;
};

struct GridSpec {
  std::vector<std::size_t> points;
  std::vector<double> lengths;
  bool operator==(const GridSpec&) const = default;
};

enum class DensityKind { gaussian, uniform, ground_state };
enum class PhaseKind { zero, plane_wave, custom_table };

struct InitialSpec {
  DensityKind density = DensityKind::gaussian;
  std::vector<double> mean;   // gaussian, per axis
  std::vector<double> sigma;  // gaussian, per axis
  PhaseKind phase = PhaseKind::zero;
  std::vector<double> p;       // plane wave momentum per axis
  std::vector<double> values;  // custom phase table, one value per node
  bool operator==(const InitialSpec&) const = default;
};

struct DynamicsSpec {
  double xi = 0.125;
  /// nullopt means the regraduated value sqrt(eta^2 / 8 xi).
  std::optional<double> k;
  double dt = 1e-3;
  std::size_t steps = 1000;
  std::size_t output_every = 100;
  /// Scale of the information metric; defaults to eta * dt.
  double C = 1e-3;
  DerivativeScheme scheme = DerivativeScheme::fourth_order;
  hamiltonian::Discretization discretization = hamiltonian::Discretization::amplitude;
  bool operator==(const DynamicsSpec&) const = default;
};

struct EnsembleSpec {
  std::size_t walkers = 100000;
  std::uint64_t master_seed = 1;
  bool operator==(const EnsembleSpec&) const = default;
};

/// Knobs of individual experiments.
struct AnalysisSpec {
  std::vector<double> probe;             // point for one-step statistics
  std::vector<std::size_t> bins;         // histogram bins per axis
  std::vector<double> scaling_dts;       // step sizes of the scaling sweeps
  std::size_t mc_samples = 100000;       // Monte Carlo metric samples
  std::vector<double> cross_k{1.0, 2.0}; // the two descriptions compared by regraduation
  std::size_t winding_axis = 0;
  bool operator==(const AnalysisSpec&) const = default;
};

struct ScenarioConfig {
  std::string name;
  SystemSpec system;
  GridSpec grid;
  Potential potential;
  InitialSpec initial;
  DynamicsSpec dynamics;
  std::optional<EnsembleSpec> ensemble;
  AnalysisSpec analysis;
  std::map<std::string, double> tolerances;
  /// Empty when the file does not set one.
  std::string output_directory;

  bool operator==(const ScenarioConfig&) const = default;

  double k() const;
  double hbar() const { return system.eta / k(); }
};

/// Metric names with their default tolerances. Every metric is checked as value <= tolerance.
const std::map<std::string, double>& default_tolerances();

/// Throws ParseError or ConfigError.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig config_from_json(const nlohmann::json& j);
/// Throws ParseError when the file cannot be read.
ScenarioConfig load_config(const std::string& path);

/// Effective config with every default written out; reloads to an identical config.
nlohmann::ordered_json to_json(const ScenarioConfig& config);

std::string to_string(DensityKind kind);
std::string to_string(PhaseKind kind);
std::string to_string(DerivativeScheme scheme);
std::string to_string(hamiltonian::Discretization d);

}  // namespace edlab::harness
