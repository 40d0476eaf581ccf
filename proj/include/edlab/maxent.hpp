#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "edlab/field.hpp"
#include "edlab/particle_system.hpp"

/// Single-step maximum-entropy transition kernel and its Chapman-Kolmogorov propagation.
namespace edlab::maxent {

/// Per-particle expected squared displacement kappa_n and the drift projection kappa'.
struct StepMoments {
  std::vector<double> kappa;
  double kappa_prime = 0.0;
  // Filled only by the Monte Carlo cross-check.
  std::vector<double> kappa_standard_error;
  double kappa_prime_standard_error = 0.0;
};

/// Gaussian kernel P(x'|x) obtained by maximizing entropy relative to a uniform
/// prior under the squared-displacement and drift constraints, with the
/// multipliers fixed at alpha_n = m_n/(eta dt) and alpha' = 1.
///
/// At every x the displacement has mean (eta dt / m_n) d(phi)/dx_n^a and
/// independent per-axis variance eta dt / m_n.
class TransitionKernel {
 public:
  /// Throws std::invalid_argument for dt <= 0 or a kernel wider than L/6 on any
  /// axis, DimensionMismatch when phi's grid does not match the system.
  TransitionKernel(ParticleSystem system, GridField drift_potential, double dt);

  const ParticleSystem& system() const { return system_; }
  const Grid& grid() const { return phi_.grid(); }
  const GridField& drift_potential() const { return phi_; }
  double dt() const { return dt_; }

  double alpha(std::size_t particle) const { return system_.mass(particle) / (system_.eta() * dt_); }
  double variance(std::size_t axis) const { return system_.eta() * dt_ / system_.axis_mass(axis); }
  /// log Z of the normalized Gaussian.
  double log_normalization() const { return log_z_; }

  const GridField& drift_gradient(std::size_t axis) const { return grad_phi_.at(axis); }
  const GridField& mean_field(std::size_t axis) const { return mean_.at(axis); }
  std::vector<double> mean_at_node(std::size_t flat) const;
  /// Mean displacement at an arbitrary point (multilinear interpolation of the node means).
  std::vector<double> mean_at(std::span<const double> x) const;

 private:
  ParticleSystem system_;
  GridField phi_;
  double dt_;
  std::vector<GridField> grad_phi_;
  std::vector<GridField> mean_;
  double log_z_ = 0.0;
};

TransitionKernel build_kernel(const ParticleSystem& system, const GridField& phi, double dt);

/// log P(x'|x) using the minimum-image displacement on the periodic box.
double kernel_log_density(const TransitionKernel& kernel, std::span<const double> x, std::span<const double> x_prime);

/// S[p, q] = -integral p log(p/q). With q == 1 this is the differential entropy of p.
/// Throws if p is negative, not normalized (1e-6), or q vanishes where p > 0.
double relative_entropy(const GridField& p, const GridField& q);

/// Closed-form constraint values at x: kappa_n = d*eta*dt/m_n + |mean_n|^2 and
/// kappa' = sum_A mean_A d_A phi.
StepMoments verify_constraints(const TransitionKernel& kernel, std::span<const double> x);

/// Monte Carlo estimate of the same moments from `samples` kernel draws.
StepMoments verify_constraints_mc(const TransitionKernel& kernel, std::span<const double> x, std::size_t samples,
                                  std::uint64_t seed);

struct PropagationResult {
  GridField rho;
  /// integral of the raw quadrature output minus one, before renormalization.
  double norm_deviation = 0.0;
};

/// Largest grid accepted by ck_propagate.
inline constexpr std::size_t kMaxDenseQuadraturePoints = std::size_t{1} << 12;

/// rho(x') = integral P(x'|x) rho(x) dx by dense quadrature. Refuses grids larger
/// than kMaxDenseQuadraturePoints; use the Fokker-Planck solver there.
PropagationResult ck_propagate(const GridField& rho, const TransitionKernel& kernel);

}  // namespace edlab::maxent
