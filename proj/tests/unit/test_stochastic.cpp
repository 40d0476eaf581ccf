#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "edlab/calculus.hpp"
#include "edlab/errors.hpp"
#include "edlab/random.hpp"
#include "edlab/stochastic.hpp"

using namespace edlab;
using namespace edlab::stochastic;
using std::numbers::pi;

TEST_CASE("counter rng is a pure function of its counters") {
  CounterRng a(7, 3, 11), b(7, 3, 11), c(7, 4, 11);
  const double x = a.normal();
  CHECK(x == b.normal());
  CHECK(x != c.normal());
  double sum = 0.0, sq = 0.0;
  CounterRng r(1, 0);
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double z = r.normal();
    sum += z;
    sq += z * z;
  }
  CHECK(std::abs(sum / n) < 0.01);
  CHECK(std::abs(sq / n - 1.0) < 0.02);
}

TEST_CASE("free diffusion spreads with variance eta dt / m per step") {
  const Grid box({64}, {100.0});
  const ParticleSystem s = ParticleSystem::single(2.0, 0.5);
  const double origin[] = {0.0};
  WalkerEnsemble e = point_ensemble(s, box, origin, 50000, 3);
  const WalkerEnsemble start = e;
  for (int i = 0; i < 10; ++i) e.advance(0.1, [](std::span<const double>, std::span<double> b) { b[0] = 0.0; });
  CHECK(e.steps() == 10);
  const MomentReport m = empirical_moments(start, e);
  const double var = 10 * 0.5 * 0.1 / 2.0;
  CHECK(std::abs(m.empirical_mean[0]) < 4.0 * m.mean_standard_error[0]);
  CHECK(std::abs(m.empirical_cov[0] - var) < 4.0 * m.cov_standard_error[0]);
}

TEST_CASE("ensembles are reproducible and independent of each other") {
  const Grid box({32}, {2.0 * pi});
  const GridField rho = normalize_density(GridField(box, 1.0));
  const WalkerEnsemble a = sample_from_density(ParticleSystem::single(1.0), rho, 1000, 9);
  const WalkerEnsemble b = sample_from_density(ParticleSystem::single(1.0), rho, 1000, 9);
  const WalkerEnsemble c = sample_from_density(ParticleSystem::single(1.0), rho, 1000, 10);
  CHECK(a == b);
  CHECK_FALSE(a == c);
}

TEST_CASE("single kernel step has the kernel's mean and variance") {
  const Grid box({128}, {2.0 * pi});
  const GridField phi = sample(box, [](const std::vector<double>& x) { return std::sin(x[0]); });
  const double dt = 0.01;
  const maxent::TransitionKernel k(ParticleSystem::single(1.0), phi, dt);
  const double origin[] = {0.0};
  const WalkerEnsemble e = point_ensemble(ParticleSystem::single(1.0), box, origin, 100000, 5);
  const WalkerEnsemble next = sample_step(e, k);
  const MomentReport m = empirical_moments(e, next);
  CHECK(std::abs(m.empirical_mean[0] - dt * 1.0) < 4.0 * m.mean_standard_error[0]);
  CHECK(std::abs(m.empirical_cov[0] - dt) < 4.0 * m.cov_standard_error[0]);
}

TEST_CASE("histogram density estimate") {
  const Grid box({16}, {4.0});
  std::vector<double> pos;
  for (int i = 0; i < 400; ++i) pos.push_back(0.1);  // all in the node at x = 0
  const WalkerEnsemble e(ParticleSystem::single(1.0), box, pos, 1);
  const DensityEstimate d = estimate_density(e, box);
  CHECK(integrate(d.rho) == doctest::Approx(1.0));
  CHECK(d.rho[8] == doctest::Approx(1.0 / box.spacing(0)));
  const WalkerEnsemble few(ParticleSystem::single(1.0), box, {0.0, 1.0}, 1);
  CHECK_THROWS(estimate_density(few, box));
}

TEST_CASE("coupled drift of a Gaussian at rest is purely osmotic") {
  const Grid g({256}, {20.0});
  const ParticleSystem s = ParticleSystem::single(1.0);
  const double sigma = 1.0;
  const GridField rho = normalize_density(
      sample(g, [&](const std::vector<double>& x) { return std::exp(-x[0] * x[0] / (2.0 * sigma * sigma)); }));
  const GridField Phi(g, 0.0);
  const auto b = coupled_drift(s, rho, Phi);
  // eta d log sqrt(rho) = -x / (2 sigma^2)
  for (std::size_t i = 100; i < 156; ++i) CHECK(b[0][i] == doctest::Approx(-g.node_coordinate(i, 0) / 2.0).epsilon(1e-4));
}

TEST_CASE("log-log slope and trajectory output") {
  const std::vector<double> x{1.0, 2.0, 4.0}, y{3.0, 12.0, 48.0};
  CHECK(loglog_slope(x, y) == doctest::Approx(2.0));
  const Grid box({8}, {2.0});
  const WalkerEnsemble e(ParticleSystem::single(1.0), box, {0.25, -0.5}, 1);
  std::ostringstream out;
  write_trajectory_header(out, 1);
  append_trajectory(out, e);
  CHECK(out.str() == "step,walker_id,x0\n0,0,0.25\n0,1,-0.5\n");
}
