#include "edlab/fourier.hpp"

#include <fftw3.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "edlab/errors.hpp"

namespace edlab {

FourierTransform::FourierTransform(const Grid& grid) : grid_(grid) {
  const std::size_t D = grid_.dim();
  std::vector<int> n(D);
  k_.resize(D);
  for (std::size_t a = 0; a < D; ++a) {
    const std::size_t N = grid_.points(a);
    n[a] = static_cast<int>(N);
    k_[a].resize(N);
    const double base = 2.0 * std::numbers::pi / grid_.length(a);
    for (std::size_t j = 0; j < N; ++j) {
      const long signed_j = (j <= N / 2) ? static_cast<long>(j) : static_cast<long>(j) - static_cast<long>(N);
      k_[a][j] = base * static_cast<double>(signed_j);
    }
  }
  // Plan on a scratch buffer; FFTW_UNALIGNED lets execute_dft run on any std::vector storage.
  fftw_complex* scratch = fftw_alloc_complex(grid_.size());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  forward_plan_ = fftw_plan_dft(static_cast<int>(D), n.data(), scratch, scratch, FFTW_FORWARD, flags);
  backward_plan_ = fftw_plan_dft(static_cast<int>(D), n.data(), scratch, scratch, FFTW_BACKWARD, flags);
  fftw_free(scratch);
  if (!forward_plan_ || !backward_plan_) {
    release();
    throw Error("FFTW failed to create a plan");
  }
}

FourierTransform::~FourierTransform() { release(); }

FourierTransform::FourierTransform(FourierTransform&& other) noexcept
    : grid_(other.grid_), k_(std::move(other.k_)), forward_plan_(other.forward_plan_), backward_plan_(other.backward_plan_) {
  other.forward_plan_ = nullptr;
  other.backward_plan_ = nullptr;
}

FourierTransform& FourierTransform::operator=(FourierTransform&& other) noexcept {
  if (this != &other) {
    release();
    grid_ = other.grid_;
    k_ = std::move(other.k_);
    forward_plan_ = other.forward_plan_;
    backward_plan_ = other.backward_plan_;
    other.forward_plan_ = nullptr;
    other.backward_plan_ = nullptr;
  }
  return *this;
}

void FourierTransform::release() {
  if (forward_plan_) fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  if (backward_plan_) fftw_destroy_plan(static_cast<fftw_plan>(backward_plan_));
  forward_plan_ = nullptr;
  backward_plan_ = nullptr;
}

void FourierTransform::forward(std::span<complex> data) const {
  if (data.size() != grid_.size()) throw DimensionMismatch("fft: buffer size does not match grid");
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(static_cast<fftw_plan>(forward_plan_), p, p);
}

void FourierTransform::backward(std::span<complex> data) const {
  if (data.size() != grid_.size()) throw DimensionMismatch("fft: buffer size does not match grid");
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(static_cast<fftw_plan>(backward_plan_), p, p);
  const double s = 1.0 / static_cast<double>(grid_.size());
  for (complex& z : data) z *= s;
}

bool FourierTransform::is_nyquist(std::size_t flat, std::size_t axis) const {
  const std::size_t N = grid_.points(axis);
  return N % 2 == 0 && grid_.axis_index(flat, axis) == N / 2;
}

}  // namespace edlab
