#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace edlab {

/// Uniform periodic grid over a box [-L_i/2, L_i/2) in each configuration-space
/// axis. Storage is row-major: the last axis varies fastest.
class Grid {
 public:
  Grid(std::vector<std::size_t> points_per_axis, std::vector<double> lengths);

  std::size_t dim() const { return points_.size(); }
  std::size_t size() const { return size_; }

  std::span<const std::size_t> points() const { return points_; }
  std::span<const double> lengths() const { return lengths_; }
  std::size_t points(std::size_t axis) const { return points_.at(axis); }
  double length(std::size_t axis) const { return lengths_.at(axis); }
  double spacing(std::size_t axis) const { return lengths_.at(axis) / static_cast<double>(points_.at(axis)); }
  std::size_t stride(std::size_t axis) const { return strides_.at(axis); }

  double cell_volume() const;
  double volume() const;

  /// Coordinate of node `index` along `axis`: -L/2 + index*h.
  double coordinate(std::size_t axis, std::size_t index) const;
  /// Coordinate along `axis` of the node with flat index `flat`.
  double node_coordinate(std::size_t flat, std::size_t axis) const;
  std::vector<double> node_position(std::size_t flat) const;

  std::size_t axis_index(std::size_t flat, std::size_t axis) const { return (flat / strides_[axis]) % points_[axis]; }
  std::vector<std::size_t> unflatten(std::size_t flat) const;
  std::size_t flatten(std::span<const std::size_t> index) const;

  /// Flat index of the periodic neighbour `offset` nodes away along `axis`.
  std::size_t neighbor(std::size_t flat, std::size_t axis, long offset) const;

  /// Wrap a coordinate into [-L/2, L/2).
  double wrap(std::size_t axis, double x) const;
  /// Minimum-image displacement to - from along `axis`.
  double minimum_image(std::size_t axis, double from, double to) const;
  bool contains(std::span<const double> point) const;

  bool operator==(const Grid& other) const { return points_ == other.points_ && lengths_ == other.lengths_; }

 private:
  std::vector<std::size_t> points_;
  std::vector<double> lengths_;
  std::vector<std::size_t> strides_;
  std::size_t size_ = 0;
};

/// Throws DimensionMismatch unless both grids are identical.
void require_same_grid(const Grid& a, const Grid& b, const char* context);

}  // namespace edlab
