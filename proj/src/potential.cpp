#include "edlab/potential.hpp"

#include <cmath>
#include <stdexcept>

#include "edlab/errors.hpp"

namespace edlab {

std::string to_string(PotentialKind kind) {
  switch (kind) {
    case PotentialKind::free: return "free";
    case PotentialKind::harmonic: return "harmonic";
    case PotentialKind::barrier: return "barrier";
    case PotentialKind::double_well: return "double-well";
    case PotentialKind::custom_table: return "custom-table";
  }
  return "free";
}

PotentialKind potential_kind_from_string(const std::string& name) {
  if (name == "free") return PotentialKind::free;
  if (name == "harmonic") return PotentialKind::harmonic;
  if (name == "barrier") return PotentialKind::barrier;
  if (name == "double-well") return PotentialKind::double_well;
  if (name == "custom-table") return PotentialKind::custom_table;
  throw std::invalid_argument("unknown potential kind '" + name + "'");
}

Potential Potential::harmonic(std::vector<double> omega, std::vector<double> center) {
  Potential p;
  p.kind = PotentialKind::harmonic;
  p.omega = std::move(omega);
  p.center = std::move(center);
  return p;
}

namespace {

double per_axis(const std::vector<double>& v, std::size_t axis, double fallback) {
  if (v.empty()) return fallback;
  if (v.size() == 1) return v[0];
  return v.at(axis);
}

void check_axis_list(const std::vector<double>& v, std::size_t dim, const char* name) {
  if (v.size() > 1 && v.size() != dim)
    throw DimensionMismatch(std::string("potential: ") + name + " needs 1 or " + std::to_string(dim) + " entries");
}

}  // namespace

GridField Potential::evaluate(const Grid& grid, const ParticleSystem& system) const {
  const std::size_t D = grid.dim();
  if (system.config_dim() != D) throw DimensionMismatch("potential: grid and particle system dimensions differ");
  check_axis_list(omega, D, "omega");
  check_axis_list(center, D, "center");
  GridField V(grid);
  switch (kind) {
    case PotentialKind::free:
      break;
    case PotentialKind::harmonic: {
      if (omega.empty()) throw std::invalid_argument("harmonic potential needs omega");
      for (std::size_t i = 0; i < grid.size(); ++i) {
        double v = 0.0;
        for (std::size_t a = 0; a < D; ++a) {
          const double w = per_axis(omega, a, 0.0);
          const double d = grid.node_coordinate(i, a) - per_axis(center, a, 0.0);
          v += 0.5 * system.axis_mass(a) * w * w * d * d;
        }
        V[i] = v;
      }
      break;
    }
    case PotentialKind::barrier: {
      if (!(width > 0.0)) throw std::invalid_argument("barrier width must be positive");
      for (std::size_t i = 0; i < grid.size(); ++i) {
        double r2 = 0.0;
        for (std::size_t a = 0; a < D; ++a) {
          const double d = grid.minimum_image(a, per_axis(center, a, 0.0), grid.node_coordinate(i, a));
          r2 += d * d;
        }
        V[i] = height * std::exp(-0.5 * r2 / (width * width));
      }
      break;
    }
    case PotentialKind::double_well: {
      if (!(separation > 0.0)) throw std::invalid_argument("double-well separation must be positive");
      const double a0 = 0.5 * separation;
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const double s = grid.node_coordinate(i, 0) / a0;
        V[i] = depth * (s * s - 1.0) * (s * s - 1.0);
      }
      break;
    }
    case PotentialKind::custom_table: {
      if (table.size() != grid.size())
        throw DimensionMismatch("custom potential table has " + std::to_string(table.size()) +
                                " entries, grid has " + std::to_string(grid.size()));
      V = GridField(grid, table);
      break;
    }
  }
  if (!V.all_finite()) throw std::invalid_argument("potential evaluates to non-finite values");
  return V;
}

}  // namespace edlab
