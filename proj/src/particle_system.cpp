#include "edlab/particle_system.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace edlab {

ParticleSystem::ParticleSystem(std::vector<double> masses, double eta, std::size_t spatial_dim)
    : masses_(std::move(masses)), eta_(eta), spatial_dim_(spatial_dim) {
  if (masses_.empty()) throw std::invalid_argument("particle system needs at least one particle");
  for (std::size_t n = 0; n < masses_.size(); ++n) {
    if (!(masses_[n] > 0.0) || !std::isfinite(masses_[n]))
      throw std::invalid_argument("particle system: mass " + std::to_string(n) + " must be positive");
  }
  if (!(eta_ > 0.0) || !std::isfinite(eta_)) throw std::invalid_argument("particle system: eta must be positive");
  if (spatial_dim_ < 1 || spatial_dim_ > 3)
    throw std::invalid_argument("particle system: spatial dimension must be 1, 2 or 3");
}

ParticleSystem ParticleSystem::single(double mass, double eta, std::size_t spatial_dim) {
  return ParticleSystem({mass}, eta, spatial_dim);
}

}  // namespace edlab
