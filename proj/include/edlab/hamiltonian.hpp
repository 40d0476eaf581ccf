#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "edlab/calculus.hpp"
#include "edlab/field.hpp"
#include "edlab/particle_system.hpp"

/// The (rho, Phi) canonical pair and its Hamiltonian evolution.
namespace edlab::hamiltonian {

struct CanonicalState {
  GridField rho;
  GridField Phi;  // action units; may be angular (period 2 pi eta / k)
  double time = 0.0;
};

/// How the discrete Hamiltonian is built from the grid values.
enum class Discretization {
  /// F = 4 xi m^AA integral (D_A sqrt(rho))^2 and kinetic rho m^AA (D_A Phi)^2 / 2.
  /// Every identity of the continuity form holds to round-off, but the quantum
  /// potential is ill-conditioned where rho decays to nothing.
  madelung,
  /// The same functional written through chi = sqrt(rho) exp(i Phi / hbar_xi),
  /// hbar_xi = sqrt(8 xi): H = integral (hbar_xi^2 / 2) m^AA |D_A chi|^2 + rho V.
  /// Stays well conditioned in empty tails. Needs xi > 0, and an angular Phi
  /// must have period 2 pi hbar_xi.
  amplitude,
};

struct FlowOptions {
  DerivativeScheme scheme = DerivativeScheme::fourth_order;
  Discretization discretization = Discretization::madelung;
  /// Relative floor for log-derivatives and the under-resolution check.
  double floor_relative = 1e-12;
  /// run() rescales rho to its initial mass after every step. Off by default: drift is reported instead.
  bool renormalize = false;
};

/// Everything the right-hand sides need besides the state.
struct Model {
  ParticleSystem system;
  double xi = 0.125;
  GridField V;
  FlowOptions options{};

  /// Throws for xi < 0, xi == 0 with the amplitude discretization, or a potential
  /// on a grid of the wrong dimension.
  Model(ParticleSystem system, double xi, GridField V, FlowOptions options = {});
};

struct VelocityFields {
  std::vector<GridField> drift_b;
  std::vector<GridField> osmotic_u;
  std::vector<GridField> current_v;
  /// phi = Phi/eta + log sqrt(rho), the drift potential of the stochastic layer.
  GridField phi;
};

/// v = m^AB d_B Phi, u = -eta m^AB d_B log sqrt(rho), b = v - u.
/// Throws UnderResolvedError when the density floor is hit on too many isolated points.
VelocityFields velocities(const CanonicalState& state, const ParticleSystem& system, const FlowOptions& options = {});

/// integral of rho m^AB d_A Phi d_B Phi / 2.
double kinetic_energy(const CanonicalState& state, const ParticleSystem& system,
                      DerivativeScheme scheme = DerivativeScheme::fourth_order);

/// H = kinetic + F[rho].
double ensemble_hamiltonian(const CanonicalState& state, const Model& model);

/// d rho/dt = -d_A(rho m^AB d_B Phi), which is delta H / delta Phi.
GridField fp_rhs(const CanonicalState& state, const ParticleSystem& system,
                 DerivativeScheme scheme = DerivativeScheme::fourth_order);

/// Drift-diffusion form -d_A(b^A rho) + (eta/2) m^AB d_A d_B rho for a given drift field.
GridField fp_drift_diffusion_rhs(const GridField& rho, const std::vector<GridField>& drift, const ParticleSystem& system,
                                 DerivativeScheme scheme = DerivativeScheme::fourth_order);

/// d rho/dt = delta H / delta Phi for the model's discretization (fp_rhs for madelung).
GridField rho_rhs(const CanonicalState& state, const Model& model);

/// d Phi/dt = -delta H / delta rho = -m^AB d_A Phi d_B Phi / 2 - delta F / delta rho.
GridField hj_rhs(const CanonicalState& state, const Model& model);

/// Largest dt for which classical RK4 stays inside its stability region for the
/// current state, from the dispersive and advective eigenvalue estimates.
double stable_dt(const CanonicalState& state, const Model& model);

/// One classical RK4 step. Throws DivergenceError(step_index) on NaN/Inf.
CanonicalState step(const CanonicalState& state, const Model& model, double dt, std::size_t step_index = 0);

struct Trajectory {
  std::vector<CanonicalState> states;  // initial state plus every output_every-th step
  /// Largest |integral rho - initial integral| seen over the run, before any renormalization.
  double max_norm_drift = 0.0;
};

Trajectory run(const CanonicalState& initial, const Model& model, double dt, std::size_t steps,
               std::size_t output_every = 1);

/// P_A = integral rho d_A Phi.
std::vector<double> momentum(const CanonicalState& state, DerivativeScheme scheme = DerivativeScheme::fourth_order);
/// The momentum the model's discretization conserves: the above for madelung,
/// hbar_xi integral Im(conj(chi) D_A chi) for amplitude.
std::vector<double> momentum(const CanonicalState& state, const Model& model);

struct ConservationReport {
  std::vector<double> t;
  std::vector<double> norm;
  std::vector<double> H;
  std::vector<std::vector<double>> P;  // P[sample][axis]
  /// H drift is max |H - H0| / |H0| (absolute when H0 == 0). Norm and momentum
  /// drifts are absolute, since P is often zero.
  double H_drift = 0.0;
  double norm_drift = 0.0;
  std::vector<double> P_drift;
};

/// Needs at least two states.
ConservationReport conservation_report(const std::vector<CanonicalState>& states, const Model& model);

/// CSV `t,norm,H,P_0,...,P_{D-1}`.
void write_conservation_csv(std::ostream& out, const ConservationReport& report);

/// A functional of the state together with its functional derivatives.
struct FunctionalHandle {
  std::string name;
  std::function<double(const CanonicalState&)> value;
  std::function<GridField(const CanonicalState&)> d_rho;
  std::function<GridField(const CanonicalState&)> d_Phi;
};

FunctionalHandle hamiltonian_functional(const Model& model);
FunctionalHandle momentum_functional(std::size_t axis, DerivativeScheme scheme = DerivativeScheme::fourth_order);
/// integral rho w.
FunctionalHandle weighted_density_functional(GridField weight);

/// {f, g} = integral (df/drho dg/dPhi - df/dPhi dg/drho). Throws if a handle lacks derivatives.
double poisson_bracket(const FunctionalHandle& f, const FunctionalHandle& g, const CanonicalState& state);

/// Variation of a path: one (delta rho, delta Phi) pair per time level.
struct PathPerturbation {
  std::vector<GridField> d_rho;
  std::vector<GridField> d_Phi;
};

/// sqrt(sum_n dt integral (d_rho^2 + d_Phi^2)).
double perturbation_norm(const PathPerturbation& perturbation, double dt);

/// Discrete action sum_n [<Phi_{n+1/2}, rho_{n+1} - rho_n> - dt H(rho_{n+1/2}, Phi_{n+1/2})]
/// over states equally spaced by dt.
double discrete_action(const std::vector<CanonicalState>& path, const Model& model, double dt);

/// (A[path + eps delta] - A[path - eps delta]) / (2 eps). Throws when the
/// perturbation does not vanish at both endpoints or has the wrong length.
double action_residual(const std::vector<CanonicalState>& path, const Model& model, double dt,
                       const PathPerturbation& perturbation, double eps = 1e-4);

}  // namespace edlab::hamiltonian
