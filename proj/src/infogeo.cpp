#include "edlab/infogeo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "edlab/errors.hpp"
#include "edlab/random.hpp"

namespace edlab::infogeo {

namespace {

void check_system(const GridField& rho, const ParticleSystem& system, const char* context) {
  if (rho.grid().dim() != system.config_dim())
    throw DimensionMismatch(std::string(context) + ": grid and particle system dimensions differ");
}

void check_normalized(const GridField& rho, const char* context) {
  const double mass = integrate(rho);
  if (std::abs(mass - 1.0) > 1e-6)
    throw std::invalid_argument(std::string(context) + ": density is not normalized (mass " + std::to_string(mass) +
                                ")");
}

GridField sqrt_density(const GridField& rho) {
  GridField r(rho.grid());
  for (std::size_t i = 0; i < rho.size(); ++i) r[i] = std::sqrt(std::max(rho[i], 0.0));
  return r;
}

}  // namespace

MetricTensors information_metric_closed(const ParticleSystem& system, double dt, double C) {
  if (!(dt > 0.0)) throw std::invalid_argument("information metric: dt must be positive");
  if (!(C > 0.0)) throw std::invalid_argument("information metric: C must be positive");
  const std::size_t D = system.config_dim();
  MetricTensors t;
  t.dim = D;
  t.C = C;
  t.gamma.assign(D * D, 0.0);
  t.mass_tensor.assign(D * D, 0.0);
  t.diffusion_tensor.assign(D * D, 0.0);
  for (std::size_t A = 0; A < D; ++A) {
    const double m = system.axis_mass(A);
    t.gamma[A * D + A] = C * m / (system.eta() * dt);
    t.mass_tensor[A * D + A] = m;
    t.diffusion_tensor[A * D + A] = 1.0 / m;
  }
  return t;
}

MetricTensors information_metric_mc(const maxent::TransitionKernel& kernel, std::span<const double> x,
                                    std::size_t samples, double C, std::uint64_t seed) {
  if (samples < 10000) throw std::invalid_argument("information_metric_mc: needs at least 1e4 samples");
  if (!(C > 0.0)) throw std::invalid_argument("information_metric_mc: C must be positive");
  const Grid& g = kernel.grid();
  const std::size_t D = g.dim();
  if (x.size() != D) throw DimensionMismatch("information_metric_mc: point has wrong dimension");
  for (std::size_t A = 0; A < D; ++A) {
    if (!(kernel.variance(A) > 0.0) || !std::isfinite(kernel.variance(A)))
      throw std::invalid_argument("information_metric_mc: degenerate kernel");
  }

  const std::vector<double> mean = kernel.mean_at(x);
  std::vector<double> sum(D * D, 0.0), sum2(D * D, 0.0);
  std::vector<double> xp(D), xs(x.begin(), x.end()), score(D);
  for (std::size_t s = 0; s < samples; ++s) {
    CounterRng rng(seed, s);
    for (std::size_t A = 0; A < D; ++A) xp[A] = g.wrap(A, x[A] + mean[A] + std::sqrt(kernel.variance(A)) * rng.normal());
    for (std::size_t A = 0; A < D; ++A) {
      const double h = 1e-3 * std::sqrt(kernel.variance(A));
      xs[A] = x[A] + h;
      const double up = kernel_log_density(kernel, xs, xp);
      xs[A] = x[A] - h;
      const double down = kernel_log_density(kernel, xs, xp);
      xs[A] = x[A];
      score[A] = (up - down) / (2.0 * h);
    }
    for (std::size_t A = 0; A < D; ++A) {
      for (std::size_t B = 0; B < D; ++B) {
        const double v = C * score[A] * score[B];
        sum[A * D + B] += v;
        sum2[A * D + B] += v * v;
      }
    }
  }

  const double M = static_cast<double>(samples);
  MetricTensors t;
  t.dim = D;
  t.C = C;
  t.gamma.resize(D * D);
  t.gamma_standard_error.resize(D * D);
  for (std::size_t i = 0; i < D * D; ++i) {
    const double m = sum[i] / M;
    t.gamma[i] = m;
    t.gamma_standard_error[i] = std::sqrt(std::max(sum2[i] / M - m * m, 0.0) / (M - 1.0));
  }
  // m_AB = (eta dt / C) gamma_AB from the estimate; the diffusion tensor inverts its diagonal.
  const double scale = kernel.system().eta() * kernel.dt() / C;
  t.mass_tensor.assign(D * D, 0.0);
  t.diffusion_tensor.assign(D * D, 0.0);
  for (std::size_t i = 0; i < D * D; ++i) t.mass_tensor[i] = scale * t.gamma[i];
  for (std::size_t A = 0; A < D; ++A) t.diffusion_tensor[A * D + A] = 1.0 / t.mass_tensor[A * D + A];
  return t;
}

double FisherMatrix::mass_weighted_trace(const ParticleSystem& system) const {
  double s = 0.0;
  for (std::size_t A = 0; A < dim; ++A) s += system.inverse_mass(A) * I[A * dim + A];
  return s;
}

FisherMatrix fisher_matrix(const GridField& rho, DerivativeScheme scheme) {
  check_normalized(rho, "fisher_matrix");
  const std::size_t D = rho.grid().dim();
  const GridField r = sqrt_density(rho);
  std::vector<GridField> dr;
  for (std::size_t A = 0; A < D; ++A) dr.push_back(gradient(r, A, scheme));
  FisherMatrix f;
  f.dim = D;
  f.I.assign(D * D, 0.0);
  for (std::size_t A = 0; A < D; ++A) {
    for (std::size_t B = A; B < D; ++B) {
      const double v = 4.0 * inner_product(dr[A], dr[B]);
      f.I[A * D + B] = v;
      f.I[B * D + A] = v;
    }
  }
  return f;
}

double functional_F(const GridField& rho, double xi, const GridField& V, const ParticleSystem& system,
                    DerivativeScheme scheme) {
  if (xi < 0.0) throw std::invalid_argument("functional_F: xi < 0 is excluded");
  check_system(rho, system, "functional_F");
  require_same_grid(rho.grid(), V.grid(), "functional_F");
  double fisher_term = 0.0;
  if (xi > 0.0) {
    const GridField r = sqrt_density(rho);
    for (std::size_t A = 0; A < rho.grid().dim(); ++A) {
      const GridField dr = gradient(r, A, scheme);
      fisher_term += 4.0 * system.inverse_mass(A) * inner_product(dr, dr);
    }
  }
  return xi * fisher_term + inner_product(rho, V);
}

GridField quantum_potential(const GridField& rho, double xi, const GridField& V, const ParticleSystem& system,
                            const QuantumPotentialOptions& options) {
  if (xi < 0.0) throw std::invalid_argument("quantum_potential: xi < 0 is excluded");
  check_system(rho, system, "quantum_potential");
  require_same_grid(rho.grid(), V.grid(), "quantum_potential");
  const Grid& g = rho.grid();
  const double floor = density_floor(rho, options.floor_relative);
  require_resolved(rho, floor, "quantum_potential");

  GridField Q = V;
  if (xi == 0.0) return Q;
  if (options.form == QuantumPotentialForm::sqrt_rho) {
    const GridField r = sqrt_density(rho);
    const double r_floor = std::sqrt(floor);
    for (std::size_t A = 0; A < g.dim(); ++A) {
      const GridField d2r = second_derivative(r, A, options.scheme);
      const double c = -4.0 * xi * system.inverse_mass(A);
      for (std::size_t i = 0; i < g.size(); ++i) Q[i] += c * d2r[i] / std::max(r[i], r_floor);
    }
  } else {
    for (std::size_t A = 0; A < g.dim(); ++A) {
      const GridField d1 = gradient(rho, A, options.scheme);
      const GridField d2 = gradient(d1, A, options.scheme);
      const double c = xi * system.inverse_mass(A);
      for (std::size_t i = 0; i < g.size(); ++i) {
        const double p = std::max(rho[i], floor);
        Q[i] += c * (d1[i] * d1[i] / (p * p) - 2.0 * d2[i] / p);
      }
    }
  }
  return Q;
}

nlohmann::json to_json(const MetricTensors& t) {
  nlohmann::ordered_json j;
  j["dim"] = t.dim;
  j["layout"] = "row-major";
  j["C"] = t.C;
  j["gamma"] = t.gamma;
  j["mass_tensor"] = t.mass_tensor;
  j["diffusion_tensor"] = t.diffusion_tensor;
  if (!t.gamma_standard_error.empty()) j["gamma_standard_error"] = t.gamma_standard_error;
  return j;
}

nlohmann::json to_json(const FisherMatrix& f) {
  nlohmann::ordered_json j;
  j["dim"] = f.dim;
  j["layout"] = "row-major";
  j["I"] = f.I;
  return j;
}

}  // namespace edlab::infogeo
