#pragma once

#include <cstddef>
#include <iosfwd>

#include "edlab/field.hpp"
#include "edlab/hamiltonian.hpp"
#include "edlab/particle_system.hpp"

/// Wave-function description Psi_k = sqrt(rho) exp(i k Phi / eta) and its evolution.
namespace edlab::schrodinger {

struct Regraduation {
  double xi = 0.0;
  double eta = 0.0;
  double k_hat = 0.0;
  double hbar = 0.0;
};

/// eta^2 / (2 k^2) - 4 xi, returned as exactly 0 when the two terms agree to
/// within 4 ulps (k at its regraduated value up to rounding).
double nonlinear_coefficient(double k, double xi, double eta);

/// k_hat = sqrt(eta^2 / (8 xi)), hbar = eta / k_hat = sqrt(8 xi). Refuses xi <= 0 and eta <= 0.
Regraduation regraduate(double xi, double eta);

/// Throws for k <= 0 or a negative density.
WaveField compose_psi(const hamiltonian::CanonicalState& state, double k, double eta);

struct Decomposition {
  hamiltonian::CanonicalState state;  // Phi carries period 2 pi eta / k
  std::size_t nodes = 0;              // isolated points with |Psi|^2 below the floor
  std::size_t reference_index = 0;    // flat index the unwrap starts from
};

/// rho = |Psi|^2 and Phi by nearest-neighbour phase unwrapping in raster order
/// from node 0. Each node is unwrapped against its neighbour one step back along
/// the last axis on which its index is nonzero.
/// Throws UnderResolvedError when more than 1% of the points are nodes.
Decomposition decompose_psi(const WaveField& psi, double floor_relative = 1e-12);

/// Unitary split-step Fourier solver for i hbar dPsi/dt = -(hbar^2/2) m^AB d_A d_B Psi + V Psi
/// with hbar = psi.hbar(): Strang splitting lifted to fourth order by Yoshida's triple jump.
/// Throws DivergenceError on NaN/Inf.
WaveField evolve_linear(const WaveField& psi, const GridField& V, const ParticleSystem& system, double dt,
                        std::size_t steps);

/// The general-k equation with the extra term (eta^2/2k^2 - 4 xi) m^AB (d_A d_B |Psi| / |Psi|) Psi.
/// Each step is a linear half-step, a pointwise phase rotation from the midpoint
/// |Psi|, and a linear half-step, composed to fourth order. The correction is set
/// to zero where |Psi|^2 falls below floor_relative * max |Psi|^2 (default: only
/// where Psi vanishes; the rotation is unitary, so noise in empty tails cannot
/// grow, while a finite floor visibly distorts the tails). With a zero
/// coefficient the steps are exactly those of evolve_linear.
/// Each dt is split into as many equal sub-steps as the explicit rotation needs
/// for stability, about |c| dt sum_A (pi/h_A)^2 / (m_A hbar).
WaveField evolve_nonlinear(const WaveField& psi, double xi, const GridField& V, const ParticleSystem& system, double dt,
                           std::size_t steps, double floor_relative = 0.0);

struct Winding {
  long winding = 0;
  /// Accumulated phase divided by the period, before rounding.
  double raw = 0.0;
  /// |raw - winding|, a health metric.
  double distance = 0.0;
};

/// Integral of the wrapped derivative of Phi around the axis-aligned loop
/// through the grid centre along `axis`, divided by the period of Phi (or
/// `period` when given). Throws Error when the result is more than 0.25 from an integer.
Winding phase_winding(const GridField& Phi, std::size_t axis, double period = 0.0);

/// CSV `x0,...,x{D-1},rho,phi,re_psi,im_psi` with phi = (eta/k) arg Psi.
void write_wave_csv(std::ostream& out, const WaveField& psi);

}  // namespace edlab::schrodinger
