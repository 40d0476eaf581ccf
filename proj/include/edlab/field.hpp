#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "edlab/grid.hpp"

namespace edlab {

using complex = std::complex<double>;

/// Real scalar sampled on every node of a periodic grid.
///
/// A positive `period` marks the field as an angle known modulo that period
/// (a drift potential or phase with winding). Differences between nodes are then
/// taken modulo the period, which lets a field such as p*x with p*L = 2*pi*n live
/// on the torus without a seam.
class GridField {
 public:
  explicit GridField(Grid grid, double fill = 0.0);
  GridField(Grid grid, std::vector<double> values, double period = 0.0);

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  double period() const { return period_; }
  bool is_angular() const { return period_ > 0.0; }
  GridField with_period(double period) const;

  bool all_finite() const;
  double max() const;
  double min() const;

  GridField& operator+=(const GridField& other);
  GridField& operator-=(const GridField& other);
  GridField& operator*=(double s);

 private:
  Grid grid_;
  std::vector<double> values_;
  double period_ = 0.0;
};

GridField operator+(GridField a, const GridField& b);
GridField operator-(GridField a, const GridField& b);
GridField operator*(GridField a, double s);
GridField operator*(double s, GridField a);
/// Pointwise product; the result is an ordinary (non-angular) field.
GridField hadamard(const GridField& a, const GridField& b);

/// Fill a field by evaluating `f(position)` at every node.
template <class F>
GridField sample(const Grid& grid, F&& f) {
  GridField out(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) out[i] = f(grid.node_position(i));
  return out;
}

/// Complex field Psi_k on the grid, together with the constants that fix its
/// phase convention: Psi_k = sqrt(rho) exp(i k Phi / eta).
class WaveField {
 public:
  WaveField(Grid grid, std::vector<complex> values, double k, double eta);

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  std::span<const complex> values() const { return values_; }
  std::span<complex> values() { return values_; }
  complex operator[](std::size_t i) const { return values_[i]; }
  complex& operator[](std::size_t i) { return values_[i]; }

  double k() const { return k_; }
  double eta() const { return eta_; }
  /// Effective Planck constant eta/k of this description.
  double hbar() const { return eta_ / k_; }

  double norm() const;
  GridField density() const;
  WaveField normalized() const;

 private:
  Grid grid_;
  std::vector<complex> values_;
  double k_;
  double eta_;
};

/// sqrt(integral |a - b|^2) for fields on the same grid.
double l2_distance(const GridField& a, const GridField& b);
double l2_distance(const WaveField& a, const WaveField& b);
/// integral |a - b|.
double l1_distance(const GridField& a, const GridField& b);
double max_abs_difference(const GridField& a, const GridField& b);

}  // namespace edlab
