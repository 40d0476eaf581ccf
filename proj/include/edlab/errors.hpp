#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace edlab {

/// Base for every runtime failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fields, kernels or ensembles disagree about the configuration-space dimension
/// or the grid they live on.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A density has collapsed below its floor on too many isolated points for
/// log-derivatives to mean anything.
class UnderResolvedError : public Error {
 public:
  UnderResolvedError(const std::string& what, std::size_t flagged, std::size_t total)
      : Error(what + " (" + std::to_string(flagged) + " of " + std::to_string(total) +
              " points flagged)"),
        flagged_(flagged),
        total_(total) {}

  std::size_t flagged() const { return flagged_; }
  std::size_t total() const { return total_; }

 private:
  std::size_t flagged_;
  std::size_t total_;
};

/// A time integrator produced NaN or Inf.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, std::size_t step)
      : Error(what + " at step " + std::to_string(step)), step_(step) {}

  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

}  // namespace edlab
