#pragma once

#include <span>
#include <vector>

#include "edlab/field.hpp"

namespace edlab {

/// In-place complex FFT over every axis of a grid (FFTW backed).
///
/// backward() includes the 1/N normalization so backward(forward(f)) == f.
/// Construction calls the FFTW planner, which is not thread-safe; build
/// transforms on one thread and share them read-only afterwards.
class FourierTransform {
 public:
  explicit FourierTransform(const Grid& grid);
  ~FourierTransform();

  FourierTransform(const FourierTransform&) = delete;
  FourierTransform& operator=(const FourierTransform&) = delete;
  FourierTransform(FourierTransform&& other) noexcept;
  FourierTransform& operator=(FourierTransform&& other) noexcept;

  const Grid& grid() const { return grid_; }
  void forward(std::span<complex> data) const;
  void backward(std::span<complex> data) const;

  /// Angular wavenumbers 2*pi*j/L in FFT order for `axis`.
  const std::vector<double>& wavenumbers(std::size_t axis) const { return k_.at(axis); }
  /// Wavenumber of `axis` for the mode with flat index `flat`.
  double wavenumber(std::size_t flat, std::size_t axis) const { return k_[axis][grid_.axis_index(flat, axis)]; }
  bool is_nyquist(std::size_t flat, std::size_t axis) const;

 private:
  void release();

  Grid grid_;
  std::vector<std::vector<double>> k_;
  void* forward_plan_ = nullptr;
  void* backward_plan_ = nullptr;
};

}  // namespace edlab
