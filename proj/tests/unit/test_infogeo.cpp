#include <doctest.h>

#include <cmath>
#include <numbers>

#include "edlab/infogeo.hpp"
#include "edlab/potential.hpp"

using namespace edlab;
using namespace edlab::infogeo;
using std::numbers::pi;

namespace {

const Grid line({512}, {24.0});

GridField gaussian(double sigma) {
  return normalize_density(
      sample(line, [&](const std::vector<double>& x) { return std::exp(-x[0] * x[0] / (2.0 * sigma * sigma)); }));
}

}  // namespace

TEST_CASE("closed-form information metric") {
  const ParticleSystem s({1.0, 3.0}, 0.5, 2);
  const MetricTensors t = information_metric_closed(s, 0.01, 0.02);
  CHECK(t.dim == 4);
  CHECK(t.gamma_at(0, 0) == doctest::Approx(0.02 * 1.0 / (0.5 * 0.01)));
  CHECK(t.gamma_at(3, 3) == doctest::Approx(0.02 * 3.0 / (0.5 * 0.01)));
  CHECK(t.gamma_at(0, 1) == 0.0);
  // m_AB = (eta dt / C) gamma_AB recovers the masses and m^AB is its inverse.
  CHECK(t.mass_tensor[2 * 4 + 2] == doctest::Approx(3.0));
  CHECK(t.diffusion_tensor[2 * 4 + 2] == doctest::Approx(1.0 / 3.0));
  CHECK_THROWS(information_metric_closed(s, 0.0, 1.0));
  CHECK_THROWS(information_metric_closed(s, 0.01, -1.0));
}

TEST_CASE("Monte Carlo metric agrees with the closed form without drift") {
  const ParticleSystem s = ParticleSystem::single(2.0);
  const maxent::TransitionKernel k(s, GridField(line), 0.01);
  const double x[] = {0.0};
  const MetricTensors mc = information_metric_mc(k, x, 100000, 0.01, 17);
  const MetricTensors exact = information_metric_closed(s, 0.01, 0.01);
  CHECK(std::abs(mc.gamma_at(0, 0) - exact.gamma_at(0, 0)) < 4.0 * mc.se_at(0, 0));
  CHECK_THROWS(information_metric_mc(k, x, 100, 0.01, 17));
}

TEST_CASE("Fisher information of a Gaussian is 1/sigma^2") {
  for (double sigma : {0.7, 1.0, 1.5}) {
    const FisherMatrix I = fisher_matrix(gaussian(sigma));
    CHECK(I(0, 0) == doctest::Approx(1.0 / (sigma * sigma)).epsilon(1e-6));
    CHECK(I.mass_weighted_trace(ParticleSystem::single(2.0)) == doctest::Approx(0.5 / (sigma * sigma)).epsilon(1e-6));
  }
  CHECK_THROWS(fisher_matrix(gaussian(1.0) * 2.0));
}

TEST_CASE("functional F of a Gaussian in a harmonic well") {
  const ParticleSystem s = ParticleSystem::single(1.0);
  const double sigma = 1.2, xi = 0.125;
  const GridField V = Potential::harmonic({1.0}).evaluate(line, s);
  // xi / sigma^2 + <x^2>/2
  CHECK(functional_F(gaussian(sigma), xi, V, s) == doctest::Approx(xi / (sigma * sigma) + 0.5 * sigma * sigma).epsilon(1e-6));
  CHECK_THROWS(functional_F(gaussian(sigma), -1.0, V, s));
}

TEST_CASE("both quantum potential forms reproduce the Gaussian closed form") {
  const ParticleSystem s = ParticleSystem::single(1.0);
  const double sigma = 1.0, xi = 0.125;
  const GridField rho = gaussian(sigma);
  const GridField V(line);
  for (auto form : {QuantumPotentialForm::sqrt_rho, QuantumPotentialForm::rho}) {
    QuantumPotentialOptions o;
    o.form = form;
    o.scheme = DerivativeScheme::spectral;
    const GridField Q = quantum_potential(rho, xi, V, s, o);
    double err = 0.0;
    for (std::size_t i = 0; i < line.size(); ++i) {
      const double x = line.node_coordinate(i, 0);
      if (std::abs(x) > 4.0) continue;
      err = std::max(err, std::abs(Q[i] - xi * (2.0 / (sigma * sigma) - x * x / std::pow(sigma, 4))));
    }
    CHECK(err < 1e-8);
  }
}

TEST_CASE("tensors serialize to JSON") {
  const MetricTensors t = information_metric_closed(ParticleSystem::single(1.0), 0.1, 0.1);
  const auto j = to_json(t);
  CHECK(j.contains("gamma"));
  CHECK(j.dump().find("1.0") != std::string::npos);
}
