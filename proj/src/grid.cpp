#include "edlab/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "edlab/errors.hpp"

namespace edlab {

Grid::Grid(std::vector<std::size_t> points_per_axis, std::vector<double> lengths)
    : points_(std::move(points_per_axis)), lengths_(std::move(lengths)) {
  if (points_.empty()) throw std::invalid_argument("grid needs at least one axis");
  if (points_.size() != lengths_.size())
    throw std::invalid_argument("grid: points_per_axis and lengths differ in size");
  for (std::size_t a = 0; a < points_.size(); ++a) {
    if (points_[a] == 0) throw std::invalid_argument("grid: axis " + std::to_string(a) + " has zero points");
    if (!(lengths_[a] > 0.0) || !std::isfinite(lengths_[a]))
      throw std::invalid_argument("grid: axis " + std::to_string(a) + " length must be positive");
  }
  strides_.assign(points_.size(), 1);
  for (std::size_t a = points_.size() - 1; a > 0; --a) strides_[a - 1] = strides_[a] * points_[a];
  size_ = strides_[0] * points_[0];
}

double Grid::cell_volume() const {
  double v = 1.0;
  for (std::size_t a = 0; a < dim(); ++a) v *= spacing(a);
  return v;
}

double Grid::volume() const {
  double v = 1.0;
  for (double l : lengths_) v *= l;
  return v;
}

double Grid::coordinate(std::size_t axis, std::size_t index) const {
  return -0.5 * lengths_[axis] + static_cast<double>(index) * spacing(axis);
}

double Grid::node_coordinate(std::size_t flat, std::size_t axis) const {
  return coordinate(axis, axis_index(flat, axis));
}

std::vector<double> Grid::node_position(std::size_t flat) const {
  std::vector<double> x(dim());
  for (std::size_t a = 0; a < dim(); ++a) x[a] = node_coordinate(flat, a);
  return x;
}

std::vector<std::size_t> Grid::unflatten(std::size_t flat) const {
  std::vector<std::size_t> idx(dim());
  for (std::size_t a = 0; a < dim(); ++a) idx[a] = axis_index(flat, a);
  return idx;
}

std::size_t Grid::flatten(std::span<const std::size_t> index) const {
  if (index.size() != dim()) throw DimensionMismatch("grid index has wrong rank");
  std::size_t flat = 0;
  for (std::size_t a = 0; a < dim(); ++a) flat += (index[a] % points_[a]) * strides_[a];
  return flat;
}

std::size_t Grid::neighbor(std::size_t flat, std::size_t axis, long offset) const {
  const long n = static_cast<long>(points_[axis]);
  const long i = static_cast<long>(axis_index(flat, axis));
  long j = (i + offset) % n;
  if (j < 0) j += n;
  return flat + static_cast<std::size_t>(j) * strides_[axis] - static_cast<std::size_t>(i) * strides_[axis];
}

double Grid::wrap(std::size_t axis, double x) const {
  const double L = lengths_[axis];
  double y = x + 0.5 * L;
  y -= L * std::floor(y / L);
  if (y >= L) y -= L;  // floor round-off
  return y - 0.5 * L;
}

double Grid::minimum_image(std::size_t axis, double from, double to) const {
  const double L = lengths_[axis];
  double d = to - from;
  d -= L * std::round(d / L);
  return d;
}

bool Grid::contains(std::span<const double> point) const {
  if (point.size() != dim()) return false;
  for (std::size_t a = 0; a < dim(); ++a) {
    if (!(point[a] >= -0.5 * lengths_[a] && point[a] < 0.5 * lengths_[a])) return false;
  }
  return true;
}

void require_same_grid(const Grid& a, const Grid& b, const char* context) {
  if (!(a == b)) throw DimensionMismatch(std::string(context) + ": fields live on different grids");
}

}  // namespace edlab
