#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <json.hpp>

#include "edlab/calculus.hpp"
#include "edlab/field.hpp"
#include "edlab/maxent.hpp"
#include "edlab/particle_system.hpp"

/// Information geometry of configuration space and of the density itself.
namespace edlab::infogeo {

/// Default relative density floor for log/sqrt denominators.
inline constexpr double kDefaultFloor = 1e-12;

/// D x D row-major tensors.
struct MetricTensors {
  std::size_t dim = 0;
  double C = 0.0;
  std::vector<double> gamma;             // information metric gamma_AB
  std::vector<double> mass_tensor;       // m_AB = (eta dt / C) gamma_AB
  std::vector<double> diffusion_tensor;  // m^AB, inverse of m_AB
  std::vector<double> gamma_standard_error;  // Monte Carlo only

  double gamma_at(std::size_t a, std::size_t b) const { return gamma[a * dim + b]; }
  double se_at(std::size_t a, std::size_t b) const { return gamma_standard_error[a * dim + b]; }
};

/// Closed form gamma_AB = C m_n / (eta dt) delta_AB. Throws for dt <= 0 or C <= 0.
MetricTensors information_metric_closed(const ParticleSystem& system, double dt, double C);

/// Monte Carlo estimate of gamma_AB = C E[d_A log P d_B log P], sampling x' from the
/// kernel at x and differentiating kernel_log_density in x. Needs samples >= 1e4.
MetricTensors information_metric_mc(const maxent::TransitionKernel& kernel, std::span<const double> x,
                                    std::size_t samples, double C, std::uint64_t seed);

struct FisherMatrix {
  std::size_t dim = 0;
  std::vector<double> I;  // row-major, units 1/length^2
  double operator()(std::size_t a, std::size_t b) const { return I[a * dim + b]; }
  /// m^AB I_AB.
  double mass_weighted_trace(const ParticleSystem& system) const;
};

/// I_AB = integral d_A rho d_B rho / rho, evaluated as 4 integral d_A sqrt(rho) d_B sqrt(rho).
/// Throws when rho is not normalized to 1e-6.
FisherMatrix fisher_matrix(const GridField& rho, DerivativeScheme scheme = DerivativeScheme::fourth_order);

/// F[rho] = xi m^AB I_AB[rho] + integral rho V. Refuses xi < 0.
double functional_F(const GridField& rho, double xi, const GridField& V, const ParticleSystem& system,
                    DerivativeScheme scheme = DerivativeScheme::fourth_order);

enum class QuantumPotentialForm {
  sqrt_rho,  // -4 xi m^AB d_A d_B sqrt(rho) / sqrt(rho) + V
  rho,       // xi m^AB (d_A rho d_B rho / rho^2 - 2 d_A d_B rho / rho) + V
};

struct QuantumPotentialOptions {
  QuantumPotentialForm form = QuantumPotentialForm::sqrt_rho;
  DerivativeScheme scheme = DerivativeScheme::fourth_order;
  double floor_relative = kDefaultFloor;
};

/// delta F / delta rho. The sqrt form with composed first-derivative stencils is the
/// exact gradient of the discrete F, so it is what the Hamiltonian flow uses.
/// Throws for xi < 0 or when the density has too many isolated points below the floor.
GridField quantum_potential(const GridField& rho, double xi, const GridField& V, const ParticleSystem& system,
                            const QuantumPotentialOptions& options = {});

nlohmann::json to_json(const MetricTensors& tensors);
nlohmann::json to_json(const FisherMatrix& fisher);

}  // namespace edlab::infogeo
