#include <doctest.h>

#include <cmath>
#include <algorithm>
#include <complex>
#include <numbers>
#include <sstream>

#include "edlab/errors.hpp"
#include "edlab/potential.hpp"
#include "edlab/schrodinger.hpp"

using namespace edlab;
using namespace edlab::schrodinger;
using hamiltonian::CanonicalState;
using std::numbers::pi;

namespace {

const Grid line({512}, {40.0});

GridField gaussian(double sigma) {
  return normalize_density(
      sample(line, [&](const std::vector<double>& x) { return std::exp(-x[0] * x[0] / (2.0 * sigma * sigma)); }));
}

}  // namespace

TEST_CASE("regraduation constants") {
  const Regraduation r = regraduate(0.125, 1.0);
  CHECK(r.k_hat == doctest::Approx(1.0));
  CHECK(r.hbar == doctest::Approx(1.0));
  const Regraduation r2 = regraduate(0.5, 2.0);
  CHECK(r2.hbar == doctest::Approx(2.0));
  CHECK(r2.k_hat == doctest::Approx(1.0));
  CHECK_THROWS(regraduate(0.0, 1.0));
  CHECK(nonlinear_coefficient(1.0, 0.125, 1.0) == 0.0);
  CHECK(nonlinear_coefficient(2.0, 0.125, 1.0) == doctest::Approx(-0.375));
  const double xi = 0.05;
  CHECK(nonlinear_coefficient(regraduate(xi, 1.0).k_hat, xi, 1.0) == 0.0);
}

TEST_CASE("compose and decompose are inverse") {
  const CanonicalState s{gaussian(1.0), sample(line, [](const std::vector<double>& x) { return 0.3 * std::sin(x[0]); }),
                         0.0};
  const WaveField psi = compose_psi(s, 2.0, 1.0);
  CHECK(psi.hbar() == doctest::Approx(0.5));
  CHECK(l2_distance(psi.density(), s.rho) < 1e-14);
  const Decomposition d = decompose_psi(psi);
  CHECK(d.state.Phi.period() == doctest::Approx(pi));
  CHECK(l2_distance(d.state.rho, s.rho) < 1e-14);
  double err = 0.0;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (s.rho[i] < 1e-10) continue;
    err = std::max(err, std::abs(wrap_difference(d.state.Phi[i] - s.Phi[i], pi)));
  }
  CHECK(err < 1e-12);
  CHECK_THROWS(compose_psi(s, 0.0, 1.0));
}

TEST_CASE("free Gaussian spreads as the closed form") {
  const double sigma = 1.0, t = 1.0;
  const CanonicalState s{gaussian(sigma), GridField(line), 0.0};
  const WaveField psi = compose_psi(s, 1.0, 1.0);
  const ParticleSystem sys = ParticleSystem::single(1.0);
  const WaveField out = evolve_linear(psi, GridField(line), sys, 0.01, 100);
  const double st = sigma * std::sqrt(1.0 + std::pow(t / (2.0 * sigma * sigma), 2));
  CHECK(l2_distance(out.density(), gaussian(st)) < 1e-10);
  CHECK(out.norm() == doctest::Approx(psi.norm()).epsilon(1e-13));
}

TEST_CASE("at the regraduated k the nonlinear solver is the linear one") {
  const CanonicalState s{gaussian(0.8), sample(line, [](const std::vector<double>& x) { return 0.2 * x[0]; }), 0.0};
  const ParticleSystem sys = ParticleSystem::single(1.0);
  const GridField V = Potential::harmonic({0.5}).evaluate(line, sys);
  const WaveField psi = compose_psi(s, 1.0, 1.0);
  const WaveField a = evolve_linear(psi, V, sys, 0.01, 50);
  const WaveField b = evolve_nonlinear(psi, 0.125, V, sys, 0.01, 50);
  CHECK(l2_distance(a, b) == 0.0);
}

TEST_CASE("the same ensemble evolves identically at another k") {
  const CanonicalState s{gaussian(1.0), GridField(line), 0.0};
  const ParticleSystem sys = ParticleSystem::single(1.0);
  const WaveField lin = evolve_linear(compose_psi(s, 1.0, 1.0), GridField(line), sys, 0.005, 100);
  const WaveField k2 = evolve_nonlinear(compose_psi(s, 2.0, 1.0), 0.125, GridField(line), sys, 0.005, 100);
  CHECK(l2_distance(lin.density(), k2.density()) < 1e-8);
}

TEST_CASE("phase winding") {
  const Grid ring({32}, {2.0 * pi});
  for (long n : {-2L, 0L, 3L}) {
    GridField Phi = GridField(ring).with_period(2.0 * pi);
    for (std::size_t i = 0; i < ring.size(); ++i) Phi[i] = std::remainder(n * ring.node_coordinate(i, 0), 2.0 * pi);
    const Winding w = phase_winding(Phi, 0);
    CHECK(w.winding == n);
    CHECK(w.distance < 1e-12);
  }
  const GridField plain(ring, 0.0);
  CHECK(phase_winding(plain, 0, 2.0 * pi).winding == 0);
}

TEST_CASE("wave csv layout") {
  const Grid tiny({8}, {8.0});
  const WaveField psi(tiny, std::vector<complex>(8, {0.5, 0.0}), 1.0, 1.0);
  std::ostringstream out;
  write_wave_csv(out, psi);
  const std::string text = out.str();
  CHECK(text.rfind("x0,rho,phi,re_psi,im_psi\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 9);
}
