#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace edlab {

/// N particles in d spatial dimensions with masses m_n and the constant eta.
/// Configuration-space axis A = n*d + a belongs to particle n.
class ParticleSystem {
 public:
  ParticleSystem(std::vector<double> masses, double eta = 1.0, std::size_t spatial_dim = 1);

  /// One particle of mass m in d dimensions.
  static ParticleSystem single(double mass, double eta = 1.0, std::size_t spatial_dim = 1);

  std::size_t n_particles() const { return masses_.size(); }
  std::size_t spatial_dim() const { return spatial_dim_; }
  /// D = N * d.
  std::size_t config_dim() const { return masses_.size() * spatial_dim_; }
  double eta() const { return eta_; }
  std::span<const double> masses() const { return masses_; }
  double mass(std::size_t particle) const { return masses_.at(particle); }

  std::size_t particle_of_axis(std::size_t axis) const { return axis / spatial_dim_; }
  /// Diagonal entry m_AA of the mass tensor.
  double axis_mass(std::size_t axis) const { return masses_.at(axis / spatial_dim_); }
  /// Diagonal entry m^AA of the diffusion tensor.
  double inverse_mass(std::size_t axis) const { return 1.0 / axis_mass(axis); }

  bool operator==(const ParticleSystem&) const = default;

 private:
  std::vector<double> masses_;
  double eta_;
  std::size_t spatial_dim_;
};

}  // namespace edlab
