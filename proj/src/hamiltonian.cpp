#include "edlab/hamiltonian.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

#include "edlab/errors.hpp"

namespace edlab::hamiltonian {

namespace {

void check_state(const CanonicalState& s, const ParticleSystem& system, const char* context) {
  require_same_grid(s.rho.grid(), s.Phi.grid(), context);
  if (s.rho.grid().dim() != system.config_dim())
    throw DimensionMismatch(std::string(context) + ": state and particle system dimensions differ");
}

// Largest |k_eff| h of the first-derivative stencil over all wavenumbers.
double max_symbol(DerivativeScheme scheme) {
  return scheme == DerivativeScheme::spectral ? std::numbers::pi : 1.3722;
}

GridField sqrt_density(const GridField& rho) {
  GridField r(rho.grid());
  for (std::size_t i = 0; i < rho.size(); ++i) r[i] = std::sqrt(std::max(rho[i], 0.0));
  return r;
}

double hbar_xi(const Model& m) { return std::sqrt(8.0 * m.xi); }

// chi = sqrt(rho) exp(i Phi / hbar) split into real and imaginary parts.
struct Amplitude {
  GridField re;
  GridField im;
};

Amplitude amplitude(const CanonicalState& s, double hbar) {
  if (s.Phi.is_angular() && std::abs(s.Phi.period() - 2.0 * std::numbers::pi * hbar) > 1e-12 * s.Phi.period())
    throw std::invalid_argument("amplitude discretization: angular Phi must have period 2 pi sqrt(8 xi)");
  Amplitude c{GridField(s.rho.grid()), GridField(s.rho.grid())};
  for (std::size_t i = 0; i < s.rho.size(); ++i) {
    const double r = std::sqrt(std::max(s.rho[i], 0.0));
    c.re[i] = r * std::cos(s.Phi[i] / hbar);
    c.im[i] = r * std::sin(s.Phi[i] / hbar);
  }
  return c;
}

// -(hbar^2/2) m^AA D_A D_A chi + V chi.
Amplitude apply_hamiltonian(const Amplitude& c, const Model& m, double hbar) {
  Amplitude out{hadamard(m.V, c.re), hadamard(m.V, c.im)};
  for (std::size_t A = 0; A < c.re.grid().dim(); ++A) {
    const double k = -0.5 * hbar * hbar * m.system.inverse_mass(A);
    out.re += second_derivative(c.re, A, m.options.scheme) * k;
    out.im += second_derivative(c.im, A, m.options.scheme) * k;
  }
  return out;
}

double madelung_F(const GridField& rho, const Model& m) {
  double f = 0.0;
  if (m.xi > 0.0) {
    const GridField r = sqrt_density(rho);
    for (std::size_t A = 0; A < rho.grid().dim(); ++A) {
      const GridField dr = gradient(r, A, m.options.scheme);
      f += 4.0 * m.xi * m.system.inverse_mass(A) * inner_product(dr, dr);
    }
  }
  return f + inner_product(rho, m.V);
}

// Exact gradient of madelung_F: -4 xi m^AA (D D r)/r + V with r = sqrt(rho).
GridField madelung_Q(const GridField& rho, const Model& m) {
  GridField out = m.V;
  if (m.xi == 0.0) return out;
  const GridField r = sqrt_density(rho);
  for (std::size_t A = 0; A < rho.grid().dim(); ++A) {
    const GridField d2r = second_derivative(r, A, m.options.scheme);
    const double c = -4.0 * m.xi * m.system.inverse_mass(A);
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (r[i] > 0.0) out[i] += c * d2r[i] / r[i];
    }
  }
  return out;
}

GridField delta_H_delta_rho(const CanonicalState& s, const Model& m) {
  if (m.options.discretization == Discretization::amplitude) {
    const double hbar = hbar_xi(m);
    const Amplitude c = amplitude(s, hbar);
    const Amplitude hc = apply_hamiltonian(c, m, hbar);
    GridField out(s.rho.grid());
    // Re(H chi / chi); left at zero where there is no density to divide by.
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (s.rho[i] > 0.0) out[i] = (hc.re[i] * c.re[i] + hc.im[i] * c.im[i]) / s.rho[i];
    }
    return out;
  }
  GridField out = madelung_Q(s.rho, m);
  for (std::size_t A = 0; A < s.rho.grid().dim(); ++A) {
    const GridField dphi = gradient(s.Phi, A, m.options.scheme);
    const double c = 0.5 * m.system.inverse_mass(A);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += c * dphi[i] * dphi[i];
  }
  return out;
}

struct Rates {
  GridField rho;
  GridField Phi;
};

Rates rates(const CanonicalState& s, const Model& m) {
  return {rho_rhs(s, m), hj_rhs(s, m)};
}

CanonicalState advance(const CanonicalState& s, const Rates& r, double dt) {
  CanonicalState out = s;
  for (std::size_t i = 0; i < out.rho.size(); ++i) {
    out.rho[i] += dt * r.rho[i];
    out.Phi[i] += dt * r.Phi[i];
  }
  out.time += dt;
  return out;
}

}  // namespace

Model::Model(ParticleSystem system_in, double xi_in, GridField V_in, FlowOptions options_in)
    : system(std::move(system_in)), xi(xi_in), V(std::move(V_in)), options(options_in) {
  if (xi < 0.0) throw std::invalid_argument("model: xi < 0 is excluded");
  if (xi == 0.0 && options.discretization == Discretization::amplitude)
    throw std::invalid_argument("model: the amplitude discretization needs xi > 0");
  if (V.grid().dim() != system.config_dim()) throw DimensionMismatch("model: potential grid has the wrong dimension");
}

VelocityFields velocities(const CanonicalState& state, const ParticleSystem& system, const FlowOptions& options) {
  check_state(state, system, "velocities");
  const Grid& g = state.rho.grid();
  const double floor = density_floor(state.rho, options.floor_relative);
  require_resolved(state.rho, floor, "velocities");
  const double eta = system.eta();
  std::vector<GridField> b, u_all, v_all;
  for (std::size_t A = 0; A < g.dim(); ++A) {
    const double inv_m = system.inverse_mass(A);
    GridField v = gradient(state.Phi, A, options.scheme) * inv_m;
    const GridField drho = gradient(state.rho, A, options.scheme);
    GridField u(g);
    for (std::size_t i = 0; i < g.size(); ++i) u[i] = -0.5 * eta * inv_m * drho[i] / std::max(state.rho[i], floor);
    b.push_back(v - u);
    u_all.push_back(std::move(u));
    v_all.push_back(std::move(v));
  }
  GridField phi(g, std::vector<double>(g.size()), state.Phi.is_angular() ? state.Phi.period() / eta : 0.0);
  for (std::size_t i = 0; i < g.size(); ++i)
    phi[i] = state.Phi[i] / eta + 0.5 * std::log(std::max(state.rho[i], floor));
  return {std::move(b), std::move(u_all), std::move(v_all), std::move(phi)};
}

double kinetic_energy(const CanonicalState& state, const ParticleSystem& system, DerivativeScheme scheme) {
  check_state(state, system, "kinetic_energy");
  double k = 0.0;
  for (std::size_t A = 0; A < state.rho.grid().dim(); ++A) {
    const GridField d = gradient(state.Phi, A, scheme);
    double s = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) s += state.rho[i] * d[i] * d[i];
    k += 0.5 * system.inverse_mass(A) * s * state.rho.grid().cell_volume();
  }
  return k;
}

double ensemble_hamiltonian(const CanonicalState& state, const Model& model) {
  if (model.options.discretization == Discretization::amplitude) {
    const double hbar = hbar_xi(model);
    const Amplitude c = amplitude(state, hbar);
    double h = inner_product(state.rho, model.V);
    for (std::size_t A = 0; A < state.rho.grid().dim(); ++A) {
      const GridField dre = gradient(c.re, A, model.options.scheme);
      const GridField dim = gradient(c.im, A, model.options.scheme);
      h += 0.5 * hbar * hbar * model.system.inverse_mass(A) * (inner_product(dre, dre) + inner_product(dim, dim));
    }
    return h;
  }
  return kinetic_energy(state, model.system, model.options.scheme) + madelung_F(state.rho, model);
}

GridField fp_rhs(const CanonicalState& state, const ParticleSystem& system, DerivativeScheme scheme) {
  check_state(state, system, "fp_rhs");
  const Grid& g = state.rho.grid();
  GridField out(g);
  for (std::size_t A = 0; A < g.dim(); ++A) {
    GridField flux = gradient(state.Phi, A, scheme);
    for (std::size_t i = 0; i < g.size(); ++i) flux[i] *= state.rho[i] * system.inverse_mass(A);
    out -= gradient(flux, A, scheme);
  }
  return out;
}

GridField fp_drift_diffusion_rhs(const GridField& rho, const std::vector<GridField>& drift,
                                 const ParticleSystem& system, DerivativeScheme scheme) {
  const Grid& g = rho.grid();
  if (drift.size() != g.dim() || g.dim() != system.config_dim())
    throw DimensionMismatch("fp_drift_diffusion_rhs: drift, grid and system dimensions differ");
  GridField out(g);
  for (std::size_t A = 0; A < g.dim(); ++A) {
    require_same_grid(g, drift[A].grid(), "fp_drift_diffusion_rhs");
    out -= gradient(hadamard(drift[A], rho), A, scheme);
    out += second_derivative(rho, A, scheme) * (0.5 * system.eta() * system.inverse_mass(A));
  }
  return out;
}

GridField rho_rhs(const CanonicalState& state, const Model& model) {
  check_state(state, model.system, "rho_rhs");
  if (model.options.discretization == Discretization::madelung) return fp_rhs(state, model.system, model.options.scheme);
  const double hbar = hbar_xi(model);
  const Amplitude c = amplitude(state, hbar);
  const Amplitude hc = apply_hamiltonian(c, model, hbar);
  GridField out(state.rho.grid());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = 2.0 / hbar * (c.re[i] * hc.im[i] - c.im[i] * hc.re[i]);
  return out;
}

GridField hj_rhs(const CanonicalState& state, const Model& model) {
  check_state(state, model.system, "hj_rhs");
  return delta_H_delta_rho(state, model) * -1.0;
}

double stable_dt(const CanonicalState& state, const Model& model) {
  const Grid& g = state.rho.grid();
  double rate = 0.0;
  for (std::size_t A = 0; A < g.dim(); ++A) {
    const double s = max_symbol(model.options.scheme) / g.spacing(A);
    const GridField d = gradient(state.Phi, A, model.options.scheme);
    double vmax = 0.0;
    for (double x : d.values()) vmax = std::max(vmax, std::abs(x));
    const double inv_m = model.system.inverse_mass(A);
    rate += std::sqrt(2.0 * model.xi) * inv_m * s * s + vmax * inv_m * s;
  }
  // Classical RK4 reaches 2.83 along the imaginary axis; keep a small margin.
  return rate > 0.0 ? 2.7 / rate : std::numeric_limits<double>::infinity();
}

CanonicalState step(const CanonicalState& state, const Model& model, double dt, std::size_t step_index) {
  if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
  require_resolved(state.rho, density_floor(state.rho, model.options.floor_relative), "hamiltonian step");
  const Rates k1 = rates(state, model);
  const Rates k2 = rates(advance(state, k1, 0.5 * dt), model);
  const Rates k3 = rates(advance(state, k2, 0.5 * dt), model);
  const Rates k4 = rates(advance(state, k3, dt), model);
  CanonicalState out = state;
  for (std::size_t i = 0; i < out.rho.size(); ++i) {
    out.rho[i] += dt / 6.0 * (k1.rho[i] + 2.0 * k2.rho[i] + 2.0 * k3.rho[i] + k4.rho[i]);
    out.Phi[i] += dt / 6.0 * (k1.Phi[i] + 2.0 * k2.Phi[i] + 2.0 * k3.Phi[i] + k4.Phi[i]);
  }
  out.time = state.time + dt;
  if (!out.rho.all_finite() || !out.Phi.all_finite()) throw DivergenceError("hamiltonian flow diverged", step_index);
  return out;
}

Trajectory run(const CanonicalState& initial, const Model& model, double dt, std::size_t steps,
               std::size_t output_every) {
  if (output_every == 0) throw std::invalid_argument("run: output_every must be positive");
  Trajectory tr;
  tr.states.push_back(initial);
  const double n0 = integrate(initial.rho);
  CanonicalState s = initial;
  for (std::size_t n = 1; n <= steps; ++n) {
    s = step(s, model, dt, n);
    tr.max_norm_drift = std::max(tr.max_norm_drift, std::abs(integrate(s.rho) - n0));
    if (model.options.renormalize) s.rho = s.rho * (n0 / integrate(s.rho));
    if (n % output_every == 0 || n == steps) tr.states.push_back(s);
  }
  return tr;
}

std::vector<double> momentum(const CanonicalState& state, DerivativeScheme scheme) {
  std::vector<double> P;
  for (std::size_t A = 0; A < state.rho.grid().dim(); ++A)
    P.push_back(inner_product(state.rho, gradient(state.Phi, A, scheme)));
  return P;
}

std::vector<double> momentum(const CanonicalState& state, const Model& model) {
  if (model.options.discretization == Discretization::madelung) return momentum(state, model.options.scheme);
  const double hbar = hbar_xi(model);
  const Amplitude c = amplitude(state, hbar);
  std::vector<double> P;
  for (std::size_t A = 0; A < state.rho.grid().dim(); ++A) {
    const GridField dre = gradient(c.re, A, model.options.scheme);
    const GridField dim = gradient(c.im, A, model.options.scheme);
    P.push_back(hbar * (inner_product(c.re, dim) - inner_product(c.im, dre)));
  }
  return P;
}

ConservationReport conservation_report(const std::vector<CanonicalState>& states, const Model& model) {
  if (states.size() < 2) throw std::invalid_argument("conservation_report: needs at least two states");
  ConservationReport r;
  for (const auto& s : states) {
    r.t.push_back(s.time);
    r.norm.push_back(integrate(s.rho));
    r.H.push_back(ensemble_hamiltonian(s, model));
    r.P.push_back(momentum(s, model));
  }
  auto drift = [](double x, double x0) { return std::abs(x - x0) / (x0 != 0.0 ? std::abs(x0) : 1.0); };
  const std::size_t D = r.P[0].size();
  r.P_drift.assign(D, 0.0);
  for (std::size_t n = 0; n < states.size(); ++n) {
    r.H_drift = std::max(r.H_drift, drift(r.H[n], r.H[0]));
    r.norm_drift = std::max(r.norm_drift, std::abs(r.norm[n] - r.norm[0]));
    for (std::size_t A = 0; A < D; ++A) r.P_drift[A] = std::max(r.P_drift[A], std::abs(r.P[n][A] - r.P[0][A]));
  }
  return r;
}

void write_conservation_csv(std::ostream& out, const ConservationReport& r) {
  const std::size_t D = r.P.empty() ? 0 : r.P[0].size();
  out << "t,norm,H";
  for (std::size_t A = 0; A < D; ++A) out << ",P_" << A;
  out << '\n';
  const auto old = out.precision(17);
  for (std::size_t n = 0; n < r.t.size(); ++n) {
    out << r.t[n] << ',' << r.norm[n] << ',' << r.H[n];
    for (double p : r.P[n]) out << ',' << p;
    out << '\n';
  }
  out.precision(old);
}

FunctionalHandle hamiltonian_functional(const Model& model) {
  return {"H", [model](const CanonicalState& s) { return ensemble_hamiltonian(s, model); },
          [model](const CanonicalState& s) { return delta_H_delta_rho(s, model); },
          [model](const CanonicalState& s) { return rho_rhs(s, model); }};
}

FunctionalHandle momentum_functional(std::size_t axis, DerivativeScheme scheme) {
  return {"P_" + std::to_string(axis),
          [axis, scheme](const CanonicalState& s) {
            return inner_product(s.rho, gradient(s.Phi, axis, scheme));
          },
          [axis, scheme](const CanonicalState& s) { return gradient(s.Phi, axis, scheme); },
          // The stencil is antisymmetric, so the adjoint of d/dx is -d/dx.
          [axis, scheme](const CanonicalState& s) { return gradient(s.rho, axis, scheme) * -1.0; }};
}

FunctionalHandle weighted_density_functional(GridField weight) {
  return {"rho_w", [weight](const CanonicalState& s) { return inner_product(s.rho, weight); },
          [weight](const CanonicalState&) { return weight; },
          [weight](const CanonicalState& s) { return GridField(s.rho.grid()); }};
}

double poisson_bracket(const FunctionalHandle& f, const FunctionalHandle& g, const CanonicalState& state) {
  for (const auto* h : {&f, &g}) {
    if (!h->d_rho || !h->d_Phi)
      throw std::invalid_argument("poisson_bracket: functional '" + h->name + "' has no derivative fields");
  }
  const GridField fr = f.d_rho(state), fp = f.d_Phi(state);
  const GridField gr = g.d_rho(state), gp = g.d_Phi(state);
  return inner_product(fr, gp) - inner_product(fp, gr);
}

double perturbation_norm(const PathPerturbation& p, double dt) {
  double s = 0.0;
  for (std::size_t n = 0; n < p.d_rho.size(); ++n) s += dt * (inner_product(p.d_rho[n], p.d_rho[n]) + inner_product(p.d_Phi[n], p.d_Phi[n]));
  return std::sqrt(s);
}

double discrete_action(const std::vector<CanonicalState>& path, const Model& model, double dt) {
  if (path.size() < 2) throw std::invalid_argument("discrete_action: path needs at least two states");
  double a = 0.0;
  for (std::size_t n = 0; n + 1 < path.size(); ++n) {
    const CanonicalState& s0 = path[n];
    const CanonicalState& s1 = path[n + 1];
    CanonicalState mid = s0;
    double sym = 0.0;
    for (std::size_t i = 0; i < mid.rho.size(); ++i) {
      mid.rho[i] = 0.5 * (s0.rho[i] + s1.rho[i]);
      mid.Phi[i] = 0.5 * (s0.Phi[i] + s1.Phi[i]);
      sym += mid.Phi[i] * (s1.rho[i] - s0.rho[i]);
    }
    a += sym * s0.rho.grid().cell_volume() - dt * ensemble_hamiltonian(mid, model);
  }
  return a;
}

double action_residual(const std::vector<CanonicalState>& path, const Model& model, double dt,
                       const PathPerturbation& p, double eps) {
  if (p.d_rho.size() != path.size() || p.d_Phi.size() != path.size())
    throw DimensionMismatch("action_residual: perturbation length does not match the path");
  for (std::size_t n : {std::size_t{0}, path.size() - 1}) {
    for (std::size_t i = 0; i < p.d_rho[n].size(); ++i) {
      if (p.d_rho[n][i] != 0.0 || p.d_Phi[n][i] != 0.0)
        throw std::invalid_argument("action_residual: perturbation must vanish at the endpoints");
    }
  }
  auto shifted = [&](double s) {
    std::vector<CanonicalState> q = path;
    for (std::size_t n = 0; n < q.size(); ++n) {
      for (std::size_t i = 0; i < q[n].rho.size(); ++i) {
        q[n].rho[i] += s * p.d_rho[n][i];
        q[n].Phi[i] += s * p.d_Phi[n][i];
      }
    }
    return q;
  };
  return (discrete_action(shifted(eps), model, dt) - discrete_action(shifted(-eps), model, dt)) / (2.0 * eps);
}

}  // namespace edlab::hamiltonian
