#pragma once

#include <cmath>

#include "edlab/random.hpp"

namespace edlab::stochastic {

template <class Drift>
void WalkerEnsemble::advance(double dt, Drift&& drift) {
  const std::size_t D = dim();
  std::vector<double> sigma(D);
  for (std::size_t A = 0; A < D; ++A) sigma[A] = std::sqrt(system_.eta() * dt / system_.axis_mass(A));
  for (std::size_t w = 0; w < walkers(); ++w) {
    double* x = positions_.data() + w * D;
    double* b = last_drift_.data() + w * D;
    drift(std::span<const double>(x, D), std::span<double>(b, D));
    CounterRng rng(master_seed_, w, steps_);
    for (std::size_t A = 0; A < D; ++A) x[A] = box_.wrap(A, x[A] + b[A] + sigma[A] * rng.normal());
  }
  ++steps_;
}

}  // namespace edlab::stochastic
