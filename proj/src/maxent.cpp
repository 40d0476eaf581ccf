#include "edlab/maxent.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "edlab/calculus.hpp"
#include "edlab/errors.hpp"
#include "edlab/random.hpp"

namespace edlab::maxent {

TransitionKernel::TransitionKernel(ParticleSystem system, GridField drift_potential, double dt)
    : system_(std::move(system)), phi_(std::move(drift_potential)), dt_(dt) {
  if (!(dt_ > 0.0) || !std::isfinite(dt_)) throw std::invalid_argument("transition kernel: dt must be positive");
  const Grid& g = phi_.grid();
  if (g.dim() != system_.config_dim())
    throw DimensionMismatch("transition kernel: phi grid has dimension " + std::to_string(g.dim()) +
                            ", system has " + std::to_string(system_.config_dim()));
  if (!phi_.all_finite()) throw std::invalid_argument("transition kernel: phi is not finite");
  log_z_ = 0.0;
  for (std::size_t a = 0; a < g.dim(); ++a) {
    const double var = variance(a);
    if (std::sqrt(var) > g.length(a) / 6.0)
      throw std::invalid_argument("transition kernel: width " + std::to_string(std::sqrt(var)) + " exceeds L/6 on axis " +
                                  std::to_string(a));
    log_z_ += 0.5 * std::log(2.0 * std::numbers::pi * var);
    grad_phi_.push_back(gradient(phi_, a));
    mean_.push_back(grad_phi_.back() * (system_.eta() * dt_ / system_.axis_mass(a)));
  }
}

std::vector<double> TransitionKernel::mean_at_node(std::size_t flat) const {
  std::vector<double> m(mean_.size());
  for (std::size_t a = 0; a < mean_.size(); ++a) m[a] = mean_[a][flat];
  return m;
}

std::vector<double> TransitionKernel::mean_at(std::span<const double> x) const {
  std::vector<double> m(mean_.size());
  for (std::size_t a = 0; a < mean_.size(); ++a) m[a] = interpolate(mean_[a], x);
  return m;
}

TransitionKernel build_kernel(const ParticleSystem& system, const GridField& phi, double dt) {
  return TransitionKernel(system, phi, dt);
}

double kernel_log_density(const TransitionKernel& kernel, std::span<const double> x, std::span<const double> x_prime) {
  const Grid& g = kernel.grid();
  if (x.size() != g.dim() || x_prime.size() != g.dim())
    throw DimensionMismatch("kernel_log_density: point dimension does not match kernel");
  const std::vector<double> mean = kernel.mean_at(x);
  double q = 0.0;
  for (std::size_t a = 0; a < g.dim(); ++a) {
    const double d = g.minimum_image(a, x[a], x_prime[a]) - mean[a];
    q += d * d / kernel.variance(a);
  }
  return -0.5 * q - kernel.log_normalization();
}

double relative_entropy(const GridField& p, const GridField& q) {
  require_same_grid(p.grid(), q.grid(), "relative_entropy");
  const double mass = integrate(p);
  if (std::abs(mass - 1.0) > 1e-6)
    throw std::invalid_argument("relative_entropy: p is not normalized (mass " + std::to_string(mass) + ")");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] < 0.0) throw std::invalid_argument("relative_entropy: p is negative at node " + std::to_string(i));
    if (p[i] == 0.0) continue;
    if (!(q[i] > 0.0)) throw std::invalid_argument("relative_entropy: q vanishes where p > 0 at node " + std::to_string(i));
    s -= p[i] * std::log(p[i] / q[i]);
  }
  return s * p.grid().cell_volume();
}

StepMoments verify_constraints(const TransitionKernel& kernel, std::span<const double> x) {
  const ParticleSystem& sys = kernel.system();
  const std::size_t d = sys.spatial_dim();
  const std::vector<double> mean = kernel.mean_at(x);
  StepMoments out;
  out.kappa.assign(sys.n_particles(), 0.0);
  for (std::size_t n = 0; n < sys.n_particles(); ++n) {
    double k = 0.0;
    for (std::size_t a = 0; a < d; ++a) {
      const std::size_t A = n * d + a;
      k += kernel.variance(A) + mean[A] * mean[A];
    }
    out.kappa[n] = k;
  }
  for (std::size_t A = 0; A < mean.size(); ++A) out.kappa_prime += mean[A] * interpolate(kernel.drift_gradient(A), x);
  return out;
}

StepMoments verify_constraints_mc(const TransitionKernel& kernel, std::span<const double> x, std::size_t samples,
                                  std::uint64_t seed) {
  if (samples < 2) throw std::invalid_argument("verify_constraints_mc: need at least two samples");
  const ParticleSystem& sys = kernel.system();
  const std::size_t d = sys.spatial_dim();
  const std::size_t D = sys.config_dim();
  const std::vector<double> mean = kernel.mean_at(x);
  std::vector<double> grad(D);
  for (std::size_t A = 0; A < D; ++A) grad[A] = interpolate(kernel.drift_gradient(A), x);

  std::vector<double> sum_k(sys.n_particles(), 0.0), sum_k2(sys.n_particles(), 0.0);
  double sum_p = 0.0, sum_p2 = 0.0;
  std::vector<double> dx(D);
  for (std::size_t s = 0; s < samples; ++s) {
    CounterRng rng(seed, s);
    for (std::size_t A = 0; A < D; ++A) dx[A] = mean[A] + std::sqrt(kernel.variance(A)) * rng.normal();
    double proj = 0.0;
    for (std::size_t A = 0; A < D; ++A) proj += dx[A] * grad[A];
    sum_p += proj;
    sum_p2 += proj * proj;
    for (std::size_t n = 0; n < sys.n_particles(); ++n) {
      double k = 0.0;
      for (std::size_t a = 0; a < d; ++a) k += dx[n * d + a] * dx[n * d + a];
      sum_k[n] += k;
      sum_k2[n] += k * k;
    }
  }
  const double M = static_cast<double>(samples);
  auto se = [M](double s1, double s2) {
    const double m = s1 / M;
    return std::sqrt(std::max(s2 / M - m * m, 0.0) / (M - 1.0));
  };
  StepMoments out;
  for (std::size_t n = 0; n < sys.n_particles(); ++n) {
    out.kappa.push_back(sum_k[n] / M);
    out.kappa_standard_error.push_back(se(sum_k[n], sum_k2[n]));
  }
  out.kappa_prime = sum_p / M;
  out.kappa_prime_standard_error = se(sum_p, sum_p2);
  return out;
}

PropagationResult ck_propagate(const GridField& rho, const TransitionKernel& kernel) {
  const Grid& g = rho.grid();
  require_same_grid(g, kernel.grid(), "ck_propagate");
  if (g.size() > kMaxDenseQuadraturePoints)
    throw std::invalid_argument("ck_propagate: grid of " + std::to_string(g.size()) +
                                " points is too large for dense quadrature; use the Fokker-Planck solver");
  const std::size_t D = g.dim();
  std::vector<double> inv_var(D);
  for (std::size_t a = 0; a < D; ++a) inv_var[a] = 1.0 / kernel.variance(a);
  const double log_z = kernel.log_normalization();
  const double dv = g.cell_volume();

  std::vector<std::vector<double>> source_pos(g.size());
  std::vector<std::vector<double>> source_mean(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    source_pos[i] = g.node_position(i);
    source_mean[i] = kernel.mean_at_node(i);
  }

  GridField out(g);
  for (std::size_t j = 0; j < g.size(); ++j) {
    const std::vector<double> xj = g.node_position(j);
    double acc = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (rho[i] == 0.0) continue;
      double q = 0.0;
      for (std::size_t a = 0; a < D; ++a) {
        const double d = g.minimum_image(a, source_pos[i][a], xj[a]) - source_mean[i][a];
        q += d * d * inv_var[a];
      }
      acc += std::exp(-0.5 * q - log_z) * rho[i];
    }
    out[j] = acc * dv;
  }
  const double in_mass = integrate(rho);
  const double mass = integrate(out);
  PropagationResult result{out, mass - in_mass};
  if (mass > 0.0) result.rho = out * (in_mass / mass);
  return result;
}

}  // namespace edlab::maxent
