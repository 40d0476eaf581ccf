#include <doctest.h>

#include <cmath>
#include <numbers>

#include "edlab/calculus.hpp"
#include "edlab/maxent.hpp"

using namespace edlab;
using namespace edlab::maxent;
using std::numbers::pi;

namespace {

const Grid ring({128}, {2.0 * pi});

GridField phi_field() {
  return sample(ring, [](const std::vector<double>& x) { return 0.5 * std::sin(x[0]); });
}

}  // namespace

TEST_CASE("kernel moments match the closed form") {
  const ParticleSystem s = ParticleSystem::single(2.0, 0.5);
  const double dt = 0.01;
  const TransitionKernel k(s, phi_field(), dt);
  CHECK(k.alpha(0) == doctest::Approx(2.0 / (0.5 * dt)));
  CHECK(k.variance(0) == doctest::Approx(0.5 * dt / 2.0));
  // log Z of a unit-normalized Gaussian with that variance
  CHECK(k.log_normalization() == doctest::Approx(0.5 * std::log(2.0 * pi * k.variance(0))));

  const double x[] = {0.0};
  const auto mean = k.mean_at(x);
  // eta dt / m * d(phi)/dx at 0 = 0.5*0.01/2 * 0.5
  CHECK(mean[0] == doctest::Approx(0.00125).epsilon(1e-6));

  const StepMoments m = verify_constraints(k, x);
  CHECK(m.kappa[0] == doctest::Approx(k.variance(0) + mean[0] * mean[0]));
  CHECK(m.kappa_prime == doctest::Approx(mean[0] * 0.5).epsilon(1e-6));
}

TEST_CASE("Monte Carlo moments agree within their standard errors") {
  const TransitionKernel k(ParticleSystem::single(1.0), phi_field(), 0.01);
  const double x[] = {0.3};
  const StepMoments exact = verify_constraints(k, x);
  const StepMoments mc = verify_constraints_mc(k, x, 200000, 42);
  CHECK(std::abs(mc.kappa[0] - exact.kappa[0]) < 4.0 * mc.kappa_standard_error[0]);
  CHECK(std::abs(mc.kappa_prime - exact.kappa_prime) < 4.0 * mc.kappa_prime_standard_error);
  // Same seed, same draws.
  const StepMoments again = verify_constraints_mc(k, x, 200000, 42);
  CHECK(again.kappa[0] == mc.kappa[0]);
}

TEST_CASE("kernel log density is a normalized Gaussian in the minimum image") {
  const TransitionKernel k(ParticleSystem::single(1.0), GridField(ring), 0.02);
  const double x[] = {3.0};
  const double near[] = {-3.2};  // 2 pi - 6.2 away through the boundary
  const double d = 2.0 * pi - 6.2;
  const double expected = -0.5 * d * d / k.variance(0) - k.log_normalization();
  CHECK(kernel_log_density(k, x, near) == doctest::Approx(expected));
}

TEST_CASE("relative entropy") {
  const GridField u = normalize_density(GridField(ring, 1.0));
  CHECK(relative_entropy(u, GridField(ring, 1.0)) == doctest::Approx(std::log(2.0 * pi)));
  CHECK(relative_entropy(u, u) == doctest::Approx(0.0));
  const GridField g = normalize_density(
      sample(ring, [](const std::vector<double>& x) { return std::exp(-x[0] * x[0] / (2.0 * 0.25)); }));
  // Differential entropy of N(0, 0.25) is 0.5 log(2 pi e 0.25).
  CHECK(relative_entropy(g, GridField(ring, 1.0)) == doctest::Approx(0.5 * std::log(2.0 * pi * std::exp(1.0) * 0.25)));
  CHECK(relative_entropy(g, u) <= 0.0);
  CHECK_THROWS(relative_entropy(GridField(ring, 1.0), GridField(ring, 1.0)));
}

TEST_CASE("Chapman-Kolmogorov step of a Gaussian without drift") {
  const Grid g({256}, {20.0});
  const double s0 = 0.5, dt = 0.05;
  const GridField rho = normalize_density(
      sample(g, [&](const std::vector<double>& x) { return std::exp(-x[0] * x[0] / (2.0 * s0 * s0)); }));
  const TransitionKernel k(ParticleSystem::single(1.0), GridField(g), dt);
  const PropagationResult r = ck_propagate(rho, k);
  const double var = s0 * s0 + dt;
  const GridField exact = normalize_density(
      sample(g, [&](const std::vector<double>& x) { return std::exp(-x[0] * x[0] / (2.0 * var)); }));
  CHECK(l2_distance(r.rho, exact) < 1e-6);
  CHECK(std::abs(r.norm_deviation) < 1e-8);
}

TEST_CASE("kernel rejects bad steps") {
  CHECK_THROWS_AS(TransitionKernel(ParticleSystem::single(1.0), phi_field(), 0.0), std::invalid_argument);
  // Standard deviation wider than L/6.
  CHECK_THROWS_AS(TransitionKernel(ParticleSystem::single(1.0), phi_field(), 2.0), std::invalid_argument);
}
