#include "edlab/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace edlab::harness {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string index_path(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

// A JSON object together with its path; remembers which keys were read so the
// rest can be rejected.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "must be an object");
  }

  std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  bool has(const std::string& key) {
    used_.insert(key);
    return j_.contains(key) && !j_.at(key).is_null();
  }

  const json& get(const std::string& key) {
    if (!has(key)) throw ConfigError(at(key), "is required");
    return j_.at(key);
  }

  Section section(const std::string& key) { return Section(get(key), at(key)); }

  double number(const std::string& key) { return as_number(get(key), at(key)); }
  double number(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }

  std::size_t count(const std::string& key) { return as_count(get(key), at(key)); }
  std::size_t count(const std::string& key, std::size_t fallback) { return has(key) ? count(key) : fallback; }

  std::string string(const std::string& key) {
    const json& v = get(key);
    if (!v.is_string()) throw ConfigError(at(key), "must be a string");
    return v.get<std::string>();
  }

  std::vector<double> numbers(const std::string& key) {
    const json& v = get(key);
    if (!v.is_array()) throw ConfigError(at(key), "must be an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_number(v[i], index_path(at(key), i)));
    return out;
  }

  std::vector<std::size_t> counts(const std::string& key) {
    const json& v = get(key);
    if (!v.is_array()) throw ConfigError(at(key), "must be an array of integers");
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_count(v[i], index_path(at(key), i)));
    return out;
  }

  void finish() const {
    for (const auto& item : j_.items()) {
      if (!used_.count(item.key())) throw ConfigError(at(item.key()), "unknown key");
    }
  }

  static double as_number(const json& v, const std::string& path) {
    if (!v.is_number()) throw ConfigError(path, "must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(path, "must be finite");
    return x;
  }

  static std::size_t as_count(const json& v, const std::string& path) {
    if (v.is_number_unsigned()) return v.get<std::size_t>();
    if (v.is_number_integer() && v.get<long long>() >= 0) return static_cast<std::size_t>(v.get<long long>());
    if (v.is_number_float()) {
      const double x = v.get<double>();
      if (x >= 0.0 && x == std::floor(x) && x < 9.0e15) return static_cast<std::size_t>(x);
    }
    throw ConfigError(path, "must be a non-negative integer");
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

void require_positive(const std::vector<double>& v, const std::string& path) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] > 0.0)) throw ConfigError(index_path(path, i), "must be positive");
  }
}

// One entry broadcasts; otherwise exactly D.
std::vector<double> per_axis(std::vector<double> v, std::size_t D, const std::string& path) {
  if (v.size() == 1 && D > 1) return std::vector<double>(D, v[0]);
  if (v.size() != D)
    throw ConfigError(path, "needs 1 or " + std::to_string(D) + " entries, got " + std::to_string(v.size()));
  return v;
}

DerivativeScheme scheme_from(const std::string& s, const std::string& path) {
  if (s == "fourth-order") return DerivativeScheme::fourth_order;
  if (s == "spectral") return DerivativeScheme::spectral;
  throw ConfigError(path, "unknown scheme '" + s + "' (fourth-order, spectral)");
}

hamiltonian::Discretization discretization_from(const std::string& s, const std::string& path) {
  if (s == "amplitude") return hamiltonian::Discretization::amplitude;
  if (s == "madelung") return hamiltonian::Discretization::madelung;
  throw ConfigError(path, "unknown discretization '" + s + "' (amplitude, madelung)");
}

void read_system(Section s, ScenarioConfig& c) {
  c.system.masses = s.numbers("masses");
  if (c.system.masses.empty()) throw ConfigError(s.at("masses"), "needs at least one particle");
  require_positive(c.system.masses, s.at("masses"));
  c.system.eta = s.number("eta", 1.0);
  if (!(c.system.eta > 0.0)) throw ConfigError(s.at("eta"), "must be positive");
  c.system.spatial_dim = s.count("spatial_dim", 1);
  if (c.system.spatial_dim == 0 || c.system.spatial_dim > 3) throw ConfigError(s.at("spatial_dim"), "must be 1, 2 or 3");
  s.finish();
}

void read_grid(Section s, ScenarioConfig& c, std::size_t D) {
  c.grid.points = s.counts("points");
  if (c.grid.points.size() != D)
    throw ConfigError(s.at("points"), "needs " + std::to_string(D) + " entries (one per configuration axis)");
  for (std::size_t i = 0; i < D; ++i) {
    if (c.grid.points[i] < 8) throw ConfigError(index_path(s.at("points"), i), "needs at least 8 points");
  }
  c.grid.lengths = per_axis(s.numbers("lengths"), D, s.at("lengths"));
  require_positive(c.grid.lengths, s.at("lengths"));
  s.finish();
}

void read_potential(Section s, ScenarioConfig& c, std::size_t D, std::size_t nodes) {
  Potential& p = c.potential;
  const std::string kind = s.string("kind");
  try {
    p.kind = potential_kind_from_string(kind);
  } catch (const std::invalid_argument&) {
    throw ConfigError(s.at("kind"), "unknown potential '" + kind + "'");
  }
  if (s.has("omega")) {
    p.omega = per_axis(s.numbers("omega"), D, s.at("omega"));
    require_positive(p.omega, s.at("omega"));
  } else if (p.kind == PotentialKind::harmonic) {
    throw ConfigError(s.at("omega"), "is required for a harmonic potential");
  }
  if (s.has("center")) p.center = per_axis(s.numbers("center"), D, s.at("center"));
  p.height = s.number("height", p.height);
  p.width = s.number("width", p.width);
  if (!(p.width > 0.0)) throw ConfigError(s.at("width"), "must be positive");
  p.separation = s.number("separation", p.separation);
  if (!(p.separation > 0.0)) throw ConfigError(s.at("separation"), "must be positive");
  p.depth = s.number("depth", p.depth);
  if (s.has("table")) p.table = s.numbers("table");
  if (p.kind == PotentialKind::custom_table && p.table.size() != nodes)
    throw ConfigError(s.at("table"), "needs one value per grid node (" + std::to_string(nodes) + ")");
  s.finish();
}

void read_initial(Section s, ScenarioConfig& c, std::size_t D, std::size_t nodes) {
  InitialSpec& in = c.initial;
  {
    Section d = s.section("density");
    const std::string kind = d.string("kind");
    if (kind == "gaussian") {
      in.density = DensityKind::gaussian;
      in.mean = d.has("mean") ? per_axis(d.numbers("mean"), D, d.at("mean")) : std::vector<double>(D, 0.0);
      in.sigma = per_axis(d.numbers("sigma"), D, d.at("sigma"));
      require_positive(in.sigma, d.at("sigma"));
    } else if (kind == "uniform") {
      in.density = DensityKind::uniform;
    } else if (kind == "ground-state") {
      in.density = DensityKind::ground_state;
      if (c.potential.kind != PotentialKind::harmonic && c.potential.kind != PotentialKind::free)
        throw ConfigError(d.at("kind"), "ground-state is available for free and harmonic potentials only");
    } else {
      throw ConfigError(d.at("kind"), "unknown density '" + kind + "' (gaussian, uniform, ground-state)");
    }
    d.finish();
  }
  if (s.has("phase")) {
    Section ph = s.section("phase");
    const std::string kind = ph.string("kind");
    if (kind == "zero") {
      in.phase = PhaseKind::zero;
    } else if (kind == "plane-wave") {
      in.phase = PhaseKind::plane_wave;
      in.p = per_axis(ph.numbers("p"), D, ph.at("p"));
    } else if (kind == "custom-table") {
      in.phase = PhaseKind::custom_table;
      in.values = ph.numbers("values");
      if (in.values.size() != nodes)
        throw ConfigError(ph.at("values"), "needs one value per grid node (" + std::to_string(nodes) + ")");
    } else {
      throw ConfigError(ph.at("kind"), "unknown phase '" + kind + "' (zero, plane-wave, custom-table)");
    }
    ph.finish();
  }
  s.finish();
}

void read_dynamics(Section s, ScenarioConfig& c) {
  DynamicsSpec& d = c.dynamics;
  const double eta = c.system.eta;
  d.xi = s.number("xi", eta * eta / 8.0);
  if (d.xi < 0.0) throw ConfigError(s.at("xi"), "must be non-negative");
  if (s.has("k")) {
    const json& k = s.get("k");
    if (k.is_string()) {
      if (k.get<std::string>() != "regraduated") throw ConfigError(s.at("k"), "must be a positive number or \"regraduated\"");
      d.k.reset();
    } else {
      d.k = Section::as_number(k, s.at("k"));
      if (!(*d.k > 0.0)) throw ConfigError(s.at("k"), "must be positive");
    }
  }
  if (!d.k && d.xi == 0.0) throw ConfigError(s.at("k"), "regraduation needs xi > 0");
  d.dt = s.number("dt", d.dt);
  if (!(d.dt > 0.0)) throw ConfigError(s.at("dt"), "must be positive");
  d.steps = s.count("steps", d.steps);
  if (d.steps == 0) throw ConfigError(s.at("steps"), "must be positive");
  d.output_every = s.count("output_every", d.output_every);
  if (d.output_every == 0) throw ConfigError(s.at("output_every"), "must be positive");
  d.C = s.number("C", eta * d.dt);
  if (!(d.C > 0.0)) throw ConfigError(s.at("C"), "must be positive");
  if (s.has("scheme")) d.scheme = scheme_from(s.string("scheme"), s.at("scheme"));
  if (s.has("discretization")) d.discretization = discretization_from(s.string("discretization"), s.at("discretization"));
  if (d.discretization == hamiltonian::Discretization::amplitude && d.xi == 0.0)
    throw ConfigError(s.at("discretization"), "amplitude needs xi > 0; use madelung");
  s.finish();
}

void read_ensemble(Section s, ScenarioConfig& c) {
  EnsembleSpec e;
  e.walkers = s.count("walkers", e.walkers);
  if (e.walkers < 100) throw ConfigError(s.at("walkers"), "needs at least 100 walkers");
  if (s.has("master_seed")) {
    const json& v = s.get("master_seed");
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
      throw ConfigError(s.at("master_seed"), "must be an unsigned 64-bit integer");
    e.master_seed = v.get<std::uint64_t>();
  }
  c.ensemble = e;
  s.finish();
}

void read_analysis(Section* s, ScenarioConfig& c, std::size_t D) {
  AnalysisSpec& a = c.analysis;
  a.probe = std::vector<double>(D, 0.25);
  a.bins = std::vector<std::size_t>(D, 128);
  a.scaling_dts = {2.5e-4, 5e-4, 1e-3, 2e-3, 4e-3};
  if (!s) return;
  if (s->has("probe")) a.probe = per_axis(s->numbers("probe"), D, s->at("probe"));
  if (s->has("bins")) {
    std::vector<std::size_t> b = s->counts("bins");
    if (b.size() == 1) b.assign(D, b[0]);
    if (b.size() != D) throw ConfigError(s->at("bins"), "needs 1 or " + std::to_string(D) + " entries");
    for (std::size_t i = 0; i < D; ++i) {
      if (b[i] < 2) throw ConfigError(index_path(s->at("bins"), i), "needs at least 2 bins");
    }
    a.bins = b;
  }
  if (s->has("scaling_dts")) {
    a.scaling_dts = s->numbers("scaling_dts");
    if (a.scaling_dts.size() < 3) throw ConfigError(s->at("scaling_dts"), "needs at least 3 step sizes");
    require_positive(a.scaling_dts, s->at("scaling_dts"));
  }
  a.mc_samples = s->count("mc_samples", a.mc_samples);
  if (a.mc_samples < 10000) throw ConfigError(s->at("mc_samples"), "needs at least 10000 samples");
  if (s->has("cross_k")) {
    a.cross_k = s->numbers("cross_k");
    if (a.cross_k.size() != 2) throw ConfigError(s->at("cross_k"), "needs exactly two values");
    require_positive(a.cross_k, s->at("cross_k"));
  }
  a.winding_axis = s->count("winding_axis", a.winding_axis);
  if (a.winding_axis >= D) throw ConfigError(s->at("winding_axis"), "is not a configuration axis");
  s->finish();
}

void read_tolerances(Section* s, ScenarioConfig& c) {
  c.tolerances = default_tolerances();
  if (!s) return;
  for (const auto& [name, fallback] : default_tolerances()) {
    const double t = s->number(name, fallback);
    if (t < 0.0) throw ConfigError(s->at(name), "must be non-negative");
    c.tolerances[name] = t;
  }
  s->finish();
}

// Plane waves must close on the torus: p L = 2 pi hbar n.
void check_plane_wave(const ScenarioConfig& c) {
  if (c.initial.phase != PhaseKind::plane_wave) return;
  const double hbar = c.hbar();
  for (std::size_t A = 0; A < c.initial.p.size(); ++A) {
    const double n = c.initial.p[A] * c.grid.lengths[A] / (2.0 * std::numbers::pi * hbar);
    if (std::abs(n - std::round(n)) > 1e-9 * std::max(1.0, std::abs(n)))
      throw ConfigError(index_path("initial.phase.p", A),
                        "p L / (2 pi eta / k) = " + std::to_string(n) + " is not an integer, the phase would not close");
  }
  if (c.dynamics.discretization == hamiltonian::Discretization::amplitude &&
      std::abs(hbar - std::sqrt(8.0 * c.dynamics.xi)) > 1e-12 * hbar)
    throw ConfigError("dynamics.discretization", "a winding phase needs k at its regraduated value in amplitude mode");
}

ordered_json scheme_json(DerivativeScheme s) { return to_string(s); }

}  // namespace

double ScenarioConfig::k() const {
  if (dynamics.k) return *dynamics.k;
  return std::sqrt(system.eta * system.eta / (8.0 * dynamics.xi));
}

const std::map<std::string, double>& default_tolerances() {
  static const std::map<std::string, double> t = {
      {"l2_rho_gap", 1e-4},
      {"norm_drift", 1e-9},
      {"H_drift", 1e-6},
      {"P_drift", 1e-8},
      {"drift_z", 3.0},
      {"variance_z", 3.0},
      {"coupled_l1", 0.02},
      {"drift_exponent_error", 0.05},
      {"fluctuation_exponent_error", 0.05},
      {"gamma_z", 3.0},
      {"metric_dt_exponent_error", 0.05},
      {"fisher_rel_error", 1e-6},
      {"qp_fd_rel_error", 1e-4},
      {"qp_forms_rel_diff", 1e-8},
      {"linear_nonlinear_l2", 1e-8},
      {"coefficient_abs", 0.0},
      {"cross_k_l2", 1e-6},
      {"winding_distance", 1e-6},
      {"winding_change", 0.0},
      {"winding_error", 0.0},
  };
  return t;
}

ScenarioConfig config_from_json(const json& j) {
  Section root(j, "");
  ScenarioConfig c;
  c.name = root.string("name");
  if (c.name.empty()) throw ConfigError("name", "must not be empty");
  read_system(root.section("system"), c);
  const std::size_t D = c.system.masses.size() * c.system.spatial_dim;
  read_grid(root.section("grid"), c, D);
  std::size_t nodes = 1;
  for (std::size_t n : c.grid.points) nodes *= n;
  if (root.has("potential")) read_potential(root.section("potential"), c, D, nodes);
  read_initial(root.section("initial"), c, D, nodes);
  if (root.has("dynamics")) {
    read_dynamics(root.section("dynamics"), c);
  } else {
    c.dynamics.xi = c.system.eta * c.system.eta / 8.0;
    c.dynamics.C = c.system.eta * c.dynamics.dt;
  }
  if (root.has("ensemble")) read_ensemble(root.section("ensemble"), c);
  if (root.has("analysis")) {
    Section a = root.section("analysis");
    read_analysis(&a, c, D);
  } else {
    read_analysis(nullptr, c, D);
  }
  if (root.has("tolerances")) {
    Section t = root.section("tolerances");
    read_tolerances(&t, c);
  } else {
    read_tolerances(nullptr, c);
  }
  if (root.has("outputs")) {
    Section o = root.section("outputs");
    c.output_directory = o.string("directory");
    o.finish();
  }
  root.finish();
  check_plane_wave(c);
  if (c.initial.density == DensityKind::ground_state && c.dynamics.xi == 0.0)
    throw ConfigError("initial.density.kind", "ground-state needs xi > 0");
  return c;
}

ScenarioConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("config is not valid JSON: ") + e.what());
  }
  return config_from_json(j);
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string to_string(DensityKind kind) {
  switch (kind) {
    case DensityKind::gaussian: return "gaussian";
    case DensityKind::uniform: return "uniform";
    case DensityKind::ground_state: return "ground-state";
  }
  return "gaussian";
}

std::string to_string(PhaseKind kind) {
  switch (kind) {
    case PhaseKind::zero: return "zero";
    case PhaseKind::plane_wave: return "plane-wave";
    case PhaseKind::custom_table: return "custom-table";
  }
  return "zero";
}

std::string to_string(DerivativeScheme scheme) {
  return scheme == DerivativeScheme::spectral ? "spectral" : "fourth-order";
}

std::string to_string(hamiltonian::Discretization d) {
  return d == hamiltonian::Discretization::madelung ? "madelung" : "amplitude";
}

ordered_json to_json(const ScenarioConfig& c) {
  ordered_json j;
  j["name"] = c.name;
  j["system"] = {{"masses", c.system.masses}, {"eta", c.system.eta}, {"spatial_dim", c.system.spatial_dim}};
  j["grid"] = {{"points", c.grid.points}, {"lengths", c.grid.lengths}};

  ordered_json pot;
  pot["kind"] = to_string(c.potential.kind);
  if (!c.potential.omega.empty()) pot["omega"] = c.potential.omega;
  if (!c.potential.center.empty()) pot["center"] = c.potential.center;
  pot["height"] = c.potential.height;
  pot["width"] = c.potential.width;
  pot["separation"] = c.potential.separation;
  pot["depth"] = c.potential.depth;
  if (!c.potential.table.empty()) pot["table"] = c.potential.table;
  j["potential"] = pot;

  ordered_json density;
  density["kind"] = to_string(c.initial.density);
  if (c.initial.density == DensityKind::gaussian) {
    density["mean"] = c.initial.mean;
    density["sigma"] = c.initial.sigma;
  }
  ordered_json phase;
  phase["kind"] = to_string(c.initial.phase);
  if (c.initial.phase == PhaseKind::plane_wave) phase["p"] = c.initial.p;
  if (c.initial.phase == PhaseKind::custom_table) phase["values"] = c.initial.values;
  j["initial"] = {{"density", density}, {"phase", phase}};

  ordered_json dyn;
  dyn["xi"] = c.dynamics.xi;
  if (c.dynamics.k) {
    dyn["k"] = *c.dynamics.k;
  } else {
    dyn["k"] = "regraduated";
  }
  dyn["dt"] = c.dynamics.dt;
  dyn["steps"] = c.dynamics.steps;
  dyn["output_every"] = c.dynamics.output_every;
  dyn["C"] = c.dynamics.C;
  dyn["scheme"] = scheme_json(c.dynamics.scheme);
  dyn["discretization"] = to_string(c.dynamics.discretization);
  j["dynamics"] = dyn;

  if (c.ensemble) j["ensemble"] = {{"walkers", c.ensemble->walkers}, {"master_seed", c.ensemble->master_seed}};

  ordered_json a;
  a["probe"] = c.analysis.probe;
  a["bins"] = c.analysis.bins;
  a["scaling_dts"] = c.analysis.scaling_dts;
  a["mc_samples"] = c.analysis.mc_samples;
  a["cross_k"] = c.analysis.cross_k;
  a["winding_axis"] = c.analysis.winding_axis;
  j["analysis"] = a;

  ordered_json tol;
  for (const auto& [name, value] : c.tolerances) tol[name] = value;
  j["tolerances"] = tol;
  if (!c.output_directory.empty()) j["outputs"] = {{"directory", c.output_directory}};
  return j;
}

}  // namespace edlab::harness
