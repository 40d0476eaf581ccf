#include "edlab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include "edlab/calculus.hpp"
#include "edlab/infogeo.hpp"
#include "edlab/maxent.hpp"
#include "edlab/schrodinger.hpp"
#include "edlab/stochastic.hpp"

namespace edlab::harness {

namespace {

using hamiltonian::CanonicalState;
using std::numbers::pi;

class Artifacts {
 public:
  Artifacts(std::string dir, RunReport& report) : dir_(std::move(dir)), report_(report) {
    if (!dir_.empty()) std::filesystem::create_directories(dir_);
  }

  bool enabled() const { return !dir_.empty(); }

  template <class Writer>
  void write(const std::string& name, Writer&& writer) {
    if (!enabled()) return;
    std::ofstream out(std::filesystem::path(dir_) / name);
    if (!out) throw Error("cannot write artifact '" + name + "' in '" + dir_ + "'");
    writer(out);
    report_.artifacts.push_back(name);
  }

 private:
  std::string dir_;
  RunReport& report_;
};

class Metrics {
 public:
  Metrics(const ScenarioConfig& c, RunReport& r) : c_(c), r_(r) {}
  void add(const std::string& name, double value) {
    r_.metrics.push_back({name, value, c_.tolerances.at(name)});
  }

 private:
  const ScenarioConfig& c_;
  RunReport& r_;
};

std::uint64_t seed_of(const ScenarioConfig& c, const RunOptions& o) {
  if (o.seed) return *o.seed;
  return c.ensemble ? c.ensemble->master_seed : 1;
}

const EnsembleSpec& require_ensemble(const ScenarioConfig& c, Experiment e) {
  if (!c.ensemble) throw ConfigError("ensemble", "is required by the " + to_string(e) + " experiment");
  return *c.ensemble;
}

// Advances Psi by `steps`, with the linear solver whenever the extra term vanishes.
WaveField evolve_wave(const WaveField& psi, const ScenarioConfig& c, const GridField& V, const ParticleSystem& system,
                      std::size_t steps) {
  const double coeff = schrodinger::nonlinear_coefficient(psi.k(), c.dynamics.xi, psi.eta());
  if (coeff == 0.0) return schrodinger::evolve_linear(psi, V, system, c.dynamics.dt, steps);
  return schrodinger::evolve_nonlinear(psi, c.dynamics.xi, V, system, c.dynamics.dt, steps);
}

// Average of rho over each histogram cell of `bins` (8 sub-samples per axis).
GridField bin_average(const GridField& rho, const Grid& bins) {
  constexpr std::size_t S = 8;
  const std::size_t D = bins.dim();
  std::size_t combos = 1;
  for (std::size_t A = 0; A < D; ++A) combos *= S;
  GridField out(bins);
  std::vector<double> x(D);
  for (std::size_t i = 0; i < bins.size(); ++i) {
    double sum = 0.0;
    for (std::size_t s = 0; s < combos; ++s) {
      std::size_t rest = s;
      for (std::size_t A = 0; A < D; ++A) {
        const double off = (static_cast<double>(rest % S) + 0.5) / S - 0.5;
        rest /= S;
        x[A] = bins.wrap(A, bins.node_coordinate(i, A) + off * bins.spacing(A));
      }
      sum += interpolate(rho, x);
    }
    out[i] = sum / static_cast<double>(combos);
  }
  return out;
}

GridField drift_potential(const CanonicalState& s, const ParticleSystem& system, const ScenarioConfig& c) {
  hamiltonian::FlowOptions o;
  o.scheme = c.dynamics.scheme;
  return hamiltonian::velocities(s, system, o).phi;
}

void run_equivalence(const ScenarioConfig& c, Metrics& m, Artifacts& art) {
  const ParticleSystem system = build_system(c);
  const hamiltonian::Model model = build_model(c);
  const CanonicalState s0 = initial_state(c);
  const hamiltonian::Trajectory tr =
      hamiltonian::run(s0, model, c.dynamics.dt, c.dynamics.steps, c.dynamics.output_every);

  WaveField psi = schrodinger::compose_psi(s0, c.k(), c.system.eta);
  std::vector<double> gaps;
  std::size_t done = 0;
  for (const CanonicalState& s : tr.states) {
    const auto target = static_cast<std::size_t>(std::llround(s.time / c.dynamics.dt));
    if (target > done) psi = evolve_wave(psi, c, model.V, system, target - done);
    done = target;
    gaps.push_back(l2_distance(s.rho, psi.density()));
  }
  m.add("l2_rho_gap", *std::max_element(gaps.begin(), gaps.end()));
  m.add("norm_drift", tr.max_norm_drift);

  art.write("equivalence.csv", [&](std::ostream& out) {
    out << "t,l2_rho\n";
    out.precision(17);
    for (std::size_t n = 0; n < gaps.size(); ++n) out << tr.states[n].time << ',' << gaps[n] << '\n';
  });
  art.write("rho_flow.csv", [&](std::ostream& out) {
    write_field_csv(out, {&tr.states.back().rho, &tr.states.back().Phi}, {"rho", "Phi"});
  });
  art.write("wave.csv", [&](std::ostream& out) { schrodinger::write_wave_csv(out, psi); });
}

void run_conservation(const ScenarioConfig& c, Metrics& m, Artifacts& art) {
  const hamiltonian::Model model = build_model(c);
  const hamiltonian::Trajectory tr =
      hamiltonian::run(initial_state(c), model, c.dynamics.dt, c.dynamics.steps, c.dynamics.output_every);
  const hamiltonian::ConservationReport r = hamiltonian::conservation_report(tr.states, model);
  m.add("H_drift", r.H_drift);
  m.add("norm_drift", std::max(r.norm_drift, tr.max_norm_drift));
  // Momentum is only conserved without an external force.
  if (c.potential.kind == PotentialKind::free)
    m.add("P_drift", *std::max_element(r.P_drift.begin(), r.P_drift.end()));
  art.write("conservation.csv", [&](std::ostream& out) { hamiltonian::write_conservation_csv(out, r); });
}

void run_stochastic_vs_fp(const ScenarioConfig& c, const RunOptions& o, Metrics& m, Artifacts& art) {
  const EnsembleSpec& e = require_ensemble(c, Experiment::stochastic_vs_fp);
  const std::uint64_t seed = seed_of(c, o);
  const ParticleSystem system = build_system(c);
  const Grid grid = build_grid(c);
  const hamiltonian::Model model = build_model(c);
  CanonicalState s = initial_state(c);

  // One kernel step from a point: mean and variance against the closed form.
  const maxent::TransitionKernel kernel(system, drift_potential(s, system, c), c.dynamics.dt);
  const auto start = stochastic::point_ensemble(system, grid, c.analysis.probe, e.walkers, seed);
  const auto after = stochastic::sample_step(start, kernel);
  const stochastic::MomentReport mom = stochastic::empirical_moments(start, after);
  const std::vector<double> mean = kernel.mean_at(c.analysis.probe);
  double drift_z = 0.0, var_z = 0.0;
  for (std::size_t A = 0; A < grid.dim(); ++A) {
    drift_z = std::max(drift_z, std::abs(mom.empirical_mean[A] - mean[A]) / mom.mean_standard_error[A]);
    var_z = std::max(var_z, std::abs(mom.empirical_cov[A] - kernel.variance(A)) / mom.cov_standard_error[A]);
  }
  m.add("drift_z", drift_z);
  m.add("variance_z", var_z);

  // Walkers driven by the drift of the evolving (rho, Phi) against the grid density.
  auto ens = stochastic::sample_from_density(system, s.rho, e.walkers, seed);
  for (std::size_t n = 1; n <= c.dynamics.steps; ++n) {
    ens = stochastic::evolve_ensemble_coupled(ens, s.rho, s.Phi, c.dynamics.dt);
    s = hamiltonian::step(s, model, c.dynamics.dt, n);
  }
  const Grid bins(c.analysis.bins, c.grid.lengths);
  const stochastic::DensityEstimate est = stochastic::estimate_density(ens, bins);
  const GridField reference = bin_average(s.rho, bins);
  m.add("coupled_l1", l1_distance(est.rho, reference));

  art.write("coupled_density.csv", [&](std::ostream& out) {
    write_field_csv(out, {&est.rho, &reference}, {"rho_ensemble", "rho_grid"});
  });
  art.write("moments.json", [&](std::ostream& out) {
    nlohmann::ordered_json j;
    j["probe"] = c.analysis.probe;
    j["expected_mean"] = mean;
    j["empirical_mean"] = mom.empirical_mean;
    j["mean_standard_error"] = mom.mean_standard_error;
    std::vector<double> var;
    for (std::size_t A = 0; A < grid.dim(); ++A) var.push_back(kernel.variance(A));
    j["expected_variance"] = var;
    j["empirical_variance"] = mom.empirical_cov;
    j["variance_standard_error"] = mom.cov_standard_error;
    out << j.dump(2) << '\n';
  });
}

void run_scaling_sweep(const ScenarioConfig& c, const RunOptions& o, Metrics& m, Artifacts& art) {
  const EnsembleSpec& e = require_ensemble(c, Experiment::scaling_sweep);
  const ParticleSystem system = build_system(c);
  const Grid grid = build_grid(c);
  const CanonicalState s = initial_state(c);
  const auto start = stochastic::point_ensemble(system, grid, c.analysis.probe, e.walkers, seed_of(c, o));
  const stochastic::ScalingFit fit =
      stochastic::fit_step_scaling(start, drift_potential(s, system, c), c.analysis.scaling_dts);
  m.add("drift_exponent_error", std::abs(fit.drift_exponent - 1.0));
  m.add("fluctuation_exponent_error", std::abs(fit.fluctuation_exponent - 0.5));
  art.write("scaling.csv", [&](std::ostream& out) {
    out << "dt,mean_abs_drift,fluctuation_rms\n";
    out.precision(17);
    for (std::size_t i = 0; i < fit.dts.size(); ++i)
      out << fit.dts[i] << ',' << fit.mean_abs_drift[i] << ',' << fit.fluctuation_rms[i] << '\n';
  });
}

void run_infogeo(const ScenarioConfig& c, const RunOptions& o, Metrics& m, Artifacts& art) {
  const std::uint64_t seed = seed_of(c, o);
  const ParticleSystem system = build_system(c);
  const hamiltonian::Model model = build_model(c);
  const CanonicalState s = initial_state(c);
  const GridField phi = drift_potential(s, system, c);
  const std::size_t D = s.rho.grid().dim();

  const maxent::TransitionKernel kernel(system, phi, c.dynamics.dt);
  const infogeo::MetricTensors closed = infogeo::information_metric_closed(system, c.dynamics.dt, c.dynamics.C);
  const infogeo::MetricTensors mc =
      infogeo::information_metric_mc(kernel, c.analysis.probe, c.analysis.mc_samples, c.dynamics.C, seed);
  double gamma_z = 0.0;
  for (std::size_t a = 0; a < D; ++a) {
    for (std::size_t b = 0; b < D; ++b)
      gamma_z = std::max(gamma_z, std::abs(mc.gamma_at(a, b) - closed.gamma_at(a, b)) / mc.se_at(a, b));
  }
  m.add("gamma_z", gamma_z);

  // gamma_00 against dt at fixed C.
  std::vector<double> g00;
  for (double dt : c.analysis.scaling_dts) {
    const maxent::TransitionKernel k(system, phi, dt);
    g00.push_back(infogeo::information_metric_mc(k, c.analysis.probe, c.analysis.mc_samples, c.dynamics.C, seed)
                      .gamma_at(0, 0));
  }
  m.add("metric_dt_exponent_error", std::abs(stochastic::loglog_slope(c.analysis.scaling_dts, g00) + 1.0));

  const infogeo::FisherMatrix fisher = infogeo::fisher_matrix(s.rho, c.dynamics.scheme);
  if (c.initial.density == DensityKind::gaussian) {
    double worst = 0.0;
    for (std::size_t a = 0; a < D; ++a) {
      const double expected = 1.0 / (c.initial.sigma[a] * c.initial.sigma[a]);
      for (std::size_t b = 0; b < D; ++b) {
        const double target = a == b ? expected : 0.0;
        worst = std::max(worst, std::abs(fisher(a, b) - target) / expected);
      }
    }
    m.add("fisher_rel_error", worst);
  }

  // delta F / delta rho against a central difference of F at a handful of well-populated nodes.
  infogeo::QuantumPotentialOptions qo;
  qo.scheme = c.dynamics.scheme;
  const GridField q = infogeo::quantum_potential(s.rho, c.dynamics.xi, model.V, system, qo);
  std::vector<std::size_t> nodes;
  for (std::size_t i = 0; i < s.rho.size(); ++i) {
    if (s.rho[i] >= 1e-3 * s.rho.max()) nodes.push_back(i);
  }
  const std::size_t probes = std::min<std::size_t>(7, nodes.size());
  double fd_err = 0.0, q_scale = 0.0;
  const double dv = s.rho.grid().cell_volume();
  for (std::size_t j = 0; j < probes; ++j) {
    const std::size_t i = nodes[j * (nodes.size() - 1) / std::max<std::size_t>(probes - 1, 1)];
    const double eps = 1e-6 * s.rho[i];
    GridField up = s.rho, down = s.rho;
    up[i] += eps;
    down[i] -= eps;
    const double fd = (infogeo::functional_F(up, c.dynamics.xi, model.V, system, c.dynamics.scheme) -
                       infogeo::functional_F(down, c.dynamics.xi, model.V, system, c.dynamics.scheme)) /
                      (2.0 * eps * dv);
    fd_err = std::max(fd_err, std::abs(fd - q[i]));
    q_scale = std::max(q_scale, std::abs(q[i]));
  }
  m.add("qp_fd_rel_error", fd_err / std::max(q_scale, 1e-300));

  // The two closed forms are compared with spectral derivatives so that
  // truncation error does not hide the algebra.
  infogeo::QuantumPotentialOptions so;
  so.scheme = DerivativeScheme::spectral;
  const GridField q_sqrt = infogeo::quantum_potential(s.rho, c.dynamics.xi, model.V, system, so);
  so.form = infogeo::QuantumPotentialForm::rho;
  const GridField q_rho = infogeo::quantum_potential(s.rho, c.dynamics.xi, model.V, system, so);
  double diff = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < s.rho.size(); ++i) {
    if (s.rho[i] < 1e-6 * s.rho.max()) continue;
    diff = std::max(diff, std::abs(q_sqrt[i] - q_rho[i]));
    scale = std::max(scale, std::abs(q_sqrt[i]));
  }
  m.add("qp_forms_rel_diff", diff / std::max(scale, 1e-300));

  art.write("metric.json", [&](std::ostream& out) {
    nlohmann::ordered_json j;
    j["closed"] = infogeo::to_json(closed);
    j["monte_carlo"] = infogeo::to_json(mc);
    j["dt_sweep"] = {{"dt", c.analysis.scaling_dts}, {"gamma_00", g00}};
    out << j.dump(2) << '\n';
  });
  art.write("fisher.json", [&](std::ostream& out) { out << infogeo::to_json(fisher).dump(2) << '\n'; });
  art.write("quantum_potential.csv", [&](std::ostream& out) {
    write_field_csv(out, {&s.rho, &q_sqrt, &q_rho}, {"rho", "Q_sqrt", "Q_rho"});
  });
}

void run_regraduation(const ScenarioConfig& c, Metrics& m, Artifacts& art) {
  if (!(c.dynamics.xi > 0.0)) throw ConfigError("dynamics.xi", "regraduation needs xi > 0");
  const ParticleSystem system = build_system(c);
  const hamiltonian::Model model = build_model(c);
  const CanonicalState s0 = initial_state(c);
  const double eta = c.system.eta;
  const std::size_t steps = c.dynamics.steps;

  std::vector<double> xis{0.05, 0.125, 0.5, c.dynamics.xi};
  std::vector<double> coeffs;
  double worst = 0.0;
  for (double xi : xis) {
    const schrodinger::Regraduation r = schrodinger::regraduate(xi, eta);
    coeffs.push_back(schrodinger::nonlinear_coefficient(r.k_hat, xi, eta));
    worst = std::max(worst, std::abs(coeffs.back()));
  }
  m.add("coefficient_abs", worst);

  const schrodinger::Regraduation r = schrodinger::regraduate(c.dynamics.xi, eta);
  CanonicalState sr = s0;
  if (sr.Phi.is_angular()) sr.Phi = sr.Phi.with_period(2.0 * pi * r.hbar);
  const WaveField psi = schrodinger::compose_psi(sr, r.k_hat, eta);
  const WaveField lin = schrodinger::evolve_linear(psi, model.V, system, c.dynamics.dt, steps);
  const WaveField non = schrodinger::evolve_nonlinear(psi, c.dynamics.xi, model.V, system, c.dynamics.dt, steps);
  m.add("linear_nonlinear_l2", l2_distance(lin, non));

  // The same physical state described at two values of k must evolve identically.
  std::vector<schrodinger::Decomposition> parts;
  for (double k : c.analysis.cross_k) {
    CanonicalState sk = s0;
    if (sk.Phi.is_angular()) sk.Phi = sk.Phi.with_period(2.0 * pi * eta / k);
    const WaveField pk = schrodinger::compose_psi(sk, k, eta);
    parts.push_back(schrodinger::decompose_psi(
        schrodinger::evolve_nonlinear(pk, c.dynamics.xi, model.V, system, c.dynamics.dt, steps)));
  }
  const auto& a = parts[0].state;
  const auto& b = parts[1].state;
  // Phi is compared through its gradient (the current), weighted by rho; its
  // additive constant lives on different lattices for the two values of k.
  double phase_gap = 0.0;
  for (std::size_t A = 0; A < a.rho.grid().dim(); ++A) {
    const GridField da = gradient(a.Phi, A, c.dynamics.scheme);
    const GridField db = gradient(b.Phi, A, c.dynamics.scheme);
    GridField w(a.rho.grid());
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double d = da[i] - db[i];
      w[i] = 0.5 * (a.rho[i] + b.rho[i]) * d * d;
    }
    phase_gap += integrate(w);
  }
  m.add("cross_k_l2", std::max(l2_distance(a.rho, b.rho), std::sqrt(phase_gap)));

  art.write("regraduation.csv", [&](std::ostream& out) {
    out << "xi,k_hat,coefficient\n";
    out.precision(17);
    for (std::size_t i = 0; i < xis.size(); ++i)
      out << xis[i] << ',' << schrodinger::regraduate(xis[i], eta).k_hat << ',' << coeffs[i] << '\n';
  });
  art.write("wave_linear.csv", [&](std::ostream& out) { schrodinger::write_wave_csv(out, lin); });
}

void run_winding(const ScenarioConfig& c, Metrics& m, Artifacts& art) {
  const ParticleSystem system = build_system(c);
  const hamiltonian::Model model = build_model(c);
  const CanonicalState s0 = initial_state(c);
  const std::size_t axis = c.analysis.winding_axis;
  const double period = 2.0 * pi * c.hbar();

  struct Row {
    std::size_t step;
    double raw;
    long winding;
  };
  std::vector<Row> rows;
  auto measure = [&](const GridField& Phi, std::size_t step) {
    try {
      const schrodinger::Winding w = schrodinger::phase_winding(Phi, axis, period);
      rows.push_back({step, w.raw, w.winding});
    } catch (const UnderResolvedError&) {
      throw;
    } catch (const Error&) {
      rows.push_back({step, std::nan(""), 0});
    }
  };

  measure(s0.Phi, 0);
  WaveField psi = schrodinger::compose_psi(s0, c.k(), c.system.eta);
  for (std::size_t done = 0; done < c.dynamics.steps;) {
    const std::size_t chunk = std::min(c.dynamics.output_every, c.dynamics.steps - done);
    psi = evolve_wave(psi, c, model.V, system, chunk);
    done += chunk;
    measure(schrodinger::decompose_psi(psi).state.Phi, done);
  }

  double distance = 0.0, change = 0.0;
  for (const Row& r : rows) {
    distance = std::max(distance, std::isfinite(r.raw) ? std::abs(r.raw - static_cast<double>(r.winding)) : r.raw);
    change = std::max(change, std::abs(static_cast<double>(r.winding - rows[0].winding)));
    if (std::isnan(r.raw)) distance = r.raw;
  }
  m.add("winding_distance", distance);
  m.add("winding_change", change);
  if (c.initial.phase == PhaseKind::plane_wave) {
    const double n = std::round(c.initial.p[axis] * c.grid.lengths[axis] / period);
    m.add("winding_error", std::abs(static_cast<double>(rows[0].winding) - n));
  }
  art.write("winding.csv", [&](std::ostream& out) {
    out << "step,t,winding,raw\n";
    out.precision(17);
    for (const Row& r : rows)
      out << r.step << ',' << static_cast<double>(r.step) * c.dynamics.dt << ',' << r.winding << ',' << r.raw << '\n';
  });
}

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"equivalence", "stochastic-vs-fp", "conservation", "scaling-sweep",
                                              "infogeo",     "regraduation",     "winding"};
  return names;
}

std::string to_string(Experiment e) { return experiment_names().at(static_cast<std::size_t>(e)); }

Experiment experiment_from_string(const std::string& name) {
  const auto& names = experiment_names();
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return static_cast<Experiment>(i);
  }
  throw std::invalid_argument("unknown experiment '" + name + "'");
}

Grid build_grid(const ScenarioConfig& c) { return Grid(c.grid.points, c.grid.lengths); }

ParticleSystem build_system(const ScenarioConfig& c) {
  return ParticleSystem(c.system.masses, c.system.eta, c.system.spatial_dim);
}

CanonicalState initial_state(const ScenarioConfig& c) {
  const Grid g = build_grid(c);
  const ParticleSystem system = build_system(c);
  const std::size_t D = g.dim();
  GridField rho(g, 1.0);
  std::vector<double> mean, sigma;
  switch (c.initial.density) {
    case DensityKind::gaussian:
      mean = c.initial.mean;
      sigma = c.initial.sigma;
      break;
    case DensityKind::uniform:
      break;
    case DensityKind::ground_state:
      if (c.potential.kind == PotentialKind::harmonic) {
        // Stationary width of the flow: sigma^2 = sqrt(8 xi) / (2 m omega).
        const double hbar = std::sqrt(8.0 * c.dynamics.xi);
        for (std::size_t A = 0; A < D; ++A) {
          const double omega = c.potential.omega.size() == 1 ? c.potential.omega[0] : c.potential.omega[A];
          mean.push_back(c.potential.center.empty() ? 0.0
                                                    : (c.potential.center.size() == 1 ? c.potential.center[0]
                                                                                      : c.potential.center[A]));
          sigma.push_back(std::sqrt(hbar / (2.0 * system.axis_mass(A) * omega)));
        }
      }
      break;
  }
  if (!sigma.empty()) {
    rho = sample(g, [&](const std::vector<double>& x) {
      double e = 0.0;
      for (std::size_t A = 0; A < D; ++A) {
        const double d = g.minimum_image(A, mean[A], x[A]);
        e += d * d / (2.0 * sigma[A] * sigma[A]);
      }
      return std::exp(-e);
    });
  }
  rho = normalize_density(rho);

  GridField Phi(g);
  switch (c.initial.phase) {
    case PhaseKind::zero:
      break;
    case PhaseKind::plane_wave:
      Phi = GridField(g, std::vector<double>(g.size()), 2.0 * pi * c.hbar());
      for (std::size_t i = 0; i < g.size(); ++i) {
        for (std::size_t A = 0; A < D; ++A) Phi[i] += c.initial.p[A] * g.node_coordinate(i, A);
      }
      break;
    case PhaseKind::custom_table:
      Phi = GridField(g, c.initial.values);
      break;
  }
  return {std::move(rho), std::move(Phi), 0.0};
}

hamiltonian::Model build_model(const ScenarioConfig& c) {
  const ParticleSystem system = build_system(c);
  hamiltonian::FlowOptions o;
  o.scheme = c.dynamics.scheme;
  o.discretization = c.dynamics.discretization;
  return hamiltonian::Model(system, c.dynamics.xi, c.potential.evaluate(build_grid(c), system), o);
}

RunReport run_experiment(const ScenarioConfig& config, Experiment experiment, const RunOptions& options) {
  ScenarioConfig c = config;
  if (options.seed && c.ensemble) c.ensemble->master_seed = *options.seed;

  RunReport report;
  report.scenario = c.name;
  report.experiment = to_string(experiment);
  report.seed = seed_of(c, options);
  report.config = to_json(c);
  Metrics m(c, report);
  Artifacts art(options.output_directory, report);

  switch (experiment) {
    case Experiment::equivalence: run_equivalence(c, m, art); break;
    case Experiment::stochastic_vs_fp: run_stochastic_vs_fp(c, options, m, art); break;
    case Experiment::conservation: run_conservation(c, m, art); break;
    case Experiment::scaling_sweep: run_scaling_sweep(c, options, m, art); break;
    case Experiment::infogeo: run_infogeo(c, options, m, art); break;
    case Experiment::regraduation: run_regraduation(c, m, art); break;
    case Experiment::winding: run_winding(c, m, art); break;
  }

  if (art.enabled()) {
    report.artifacts.push_back("report.json");
    std::ofstream out(std::filesystem::path(options.output_directory) / "report.json");
    if (!out) throw Error("cannot write report.json in '" + options.output_directory + "'");
    out << emit_report(report, ReportFormat::json);
  }
  return report;
}

std::string resolve_output_directory(const std::string& cli_value, const ScenarioConfig& config) {
  if (!cli_value.empty()) return cli_value;
  if (!config.output_directory.empty()) return config.output_directory;
  if (const char* env = std::getenv("EDLAB_OUT"); env && *env) return env;
  return "edlab-out";
}

}  // namespace edlab::harness
