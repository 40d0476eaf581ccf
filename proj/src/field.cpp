#include "edlab/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "edlab/errors.hpp"

namespace edlab {

GridField::GridField(Grid grid, double fill) : grid_(std::move(grid)), values_(grid_.size(), fill) {}

GridField::GridField(Grid grid, std::vector<double> values, double period)
    : grid_(std::move(grid)), values_(std::move(values)), period_(period) {
  if (values_.size() != grid_.size())
    throw DimensionMismatch("grid field: value count " + std::to_string(values_.size()) +
                            " does not match grid size " + std::to_string(grid_.size()));
  if (period_ < 0.0 || !std::isfinite(period_)) throw std::invalid_argument("grid field: period must be >= 0");
}

GridField GridField::with_period(double period) const {
  return GridField(grid_, values_, period);
}

bool GridField::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

double GridField::max() const { return *std::max_element(values_.begin(), values_.end()); }
double GridField::min() const { return *std::min_element(values_.begin(), values_.end()); }

GridField& GridField::operator+=(const GridField& other) {
  require_same_grid(grid_, other.grid_, "field +=");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

GridField& GridField::operator-=(const GridField& other) {
  require_same_grid(grid_, other.grid_, "field -=");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

GridField& GridField::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

GridField operator+(GridField a, const GridField& b) { return a += b; }
GridField operator-(GridField a, const GridField& b) { return a -= b; }
GridField operator*(GridField a, double s) { return a *= s; }
GridField operator*(double s, GridField a) { return a *= s; }

GridField hadamard(const GridField& a, const GridField& b) {
  require_same_grid(a.grid(), b.grid(), "hadamard");
  GridField out(a.grid());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

WaveField::WaveField(Grid grid, std::vector<complex> values, double k, double eta)
    : grid_(std::move(grid)), values_(std::move(values)), k_(k), eta_(eta) {
  if (values_.size() != grid_.size()) throw DimensionMismatch("wave field: value count does not match grid");
  if (!(k_ > 0.0)) throw std::invalid_argument("wave field: k must be positive");
  if (!(eta_ > 0.0)) throw std::invalid_argument("wave field: eta must be positive");
}

double WaveField::norm() const {
  double s = 0.0;
  for (const complex& z : values_) s += std::norm(z);
  return s * grid_.cell_volume();
}

GridField WaveField::density() const {
  GridField rho(grid_);
  for (std::size_t i = 0; i < values_.size(); ++i) rho[i] = std::norm(values_[i]);
  return rho;
}

WaveField WaveField::normalized() const {
  const double n = norm();
  if (!(n > 0.0)) throw std::invalid_argument("wave field: cannot normalize a zero field");
  WaveField out = *this;
  const double s = 1.0 / std::sqrt(n);
  for (complex& z : out.values_) z *= s;
  return out;
}

double l2_distance(const GridField& a, const GridField& b) {
  require_same_grid(a.grid(), b.grid(), "l2_distance");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s * a.grid().cell_volume());
}

double l2_distance(const WaveField& a, const WaveField& b) {
  require_same_grid(a.grid(), b.grid(), "l2_distance");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
  return std::sqrt(s * a.grid().cell_volume());
}

double l1_distance(const GridField& a, const GridField& b) {
  require_same_grid(a.grid(), b.grid(), "l1_distance");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s * a.grid().cell_volume();
}

double max_abs_difference(const GridField& a, const GridField& b) {
  require_same_grid(a.grid(), b.grid(), "max_abs_difference");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace edlab
