#pragma once

#include <string>
#include <vector>

#include "edlab/field.hpp"
#include "edlab/particle_system.hpp"

namespace edlab {

enum class PotentialKind { free, harmonic, barrier, double_well, custom_table };

std::string to_string(PotentialKind kind);
PotentialKind potential_kind_from_string(const std::string& name);

/// External scalar potential V(x).
///
/// harmonic:    V = sum_A m_A omega_A^2 (x_A - c_A)^2 / 2
/// barrier:     V = height * exp(-|x - c|^2 / (2 width^2))
/// double-well: V = depth * ((x_0 / (separation/2))^2 - 1)^2 along axis 0
/// custom-table: one value per grid node.
struct Potential {
  PotentialKind kind = PotentialKind::free;
  std::vector<double> omega;   // harmonic, one per axis (a single value broadcasts)
  std::vector<double> center;  // harmonic / barrier, defaults to the origin
  double height = 0.0;         // barrier
  double width = 1.0;          // barrier
  double separation = 2.0;     // double-well
  double depth = 1.0;          // double-well
  std::vector<double> table;   // custom-table

  static Potential free_space() { return {}; }
  static Potential harmonic(std::vector<double> omega, std::vector<double> center = {});

  /// Evaluate on every node; throws if the result is not finite or the table size is wrong.
  GridField evaluate(const Grid& grid, const ParticleSystem& system) const;

  bool operator==(const Potential&) const = default;
};

}  // namespace edlab
