#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "edlab/errors.hpp"
#include "edlab/hamiltonian.hpp"
#include "edlab/potential.hpp"

using namespace edlab;
using namespace edlab::hamiltonian;
using std::numbers::pi;

namespace {

const Grid ring({64}, {2.0 * pi});

GridField field(double (*f)(double)) {
  return sample(ring, [f](const std::vector<double>& x) { return f(x[0]); });
}

CanonicalState smooth_state() {
  return {normalize_density(field([](double x) { return std::exp(0.5 * std::cos(x) + 0.2 * std::sin(2.0 * x)); })),
          field([](double x) { return 0.3 * std::sin(x) + 0.1 * std::cos(2.0 * x); }), 0.0};
}

Model ring_model(Discretization d, double xi = 0.125) {
  FlowOptions o;
  o.discretization = d;
  o.scheme = DerivativeScheme::spectral;
  return Model(ParticleSystem::single(1.0), xi, GridField(ring), o);
}

}  // namespace

TEST_CASE("velocities and kinetic energy for a uniform density") {
  const CanonicalState s{normalize_density(GridField(ring, 1.0)), field([](double x) { return 0.4 * std::sin(x); }), 0.0};
  const ParticleSystem m = ParticleSystem::single(2.0);
  const VelocityFields v = velocities(s, m, {DerivativeScheme::spectral});
  for (std::size_t i = 0; i < ring.size(); ++i) {
    const double x = ring.node_coordinate(i, 0);
    CHECK(v.current_v[0][i] == doctest::Approx(0.2 * std::cos(x)));
    CHECK(v.osmotic_u[0][i] == doctest::Approx(0.0));
    CHECK(v.drift_b[0][i] == doctest::Approx(0.2 * std::cos(x)));
  }
  // integral rho (0.4 cos x)^2 / (2 m) with rho = 1/(2 pi)
  CHECK(kinetic_energy(s, m, DerivativeScheme::spectral) == doctest::Approx(0.16 / 8.0));
}

TEST_CASE("continuity right-hand side is a divergence") {
  const CanonicalState s = smooth_state();
  const GridField r = fp_rhs(s, ParticleSystem::single(1.0));
  CHECK(std::abs(integrate(r)) < 1e-14);
  // rho_rhs in the madelung form is the same field
  CHECK(max_abs_difference(rho_rhs(s, ring_model(Discretization::madelung)),
                           fp_rhs(s, ParticleSystem::single(1.0), DerivativeScheme::spectral)) < 1e-14);
}

TEST_CASE("Poisson brackets of simple functionals") {
  const CanonicalState s = smooth_state();
  const GridField w = field([](double x) { return std::sin(x); });
  const auto F = weighted_density_functional(w);
  const auto P = momentum_functional(0, DerivativeScheme::spectral);
  // {integral rho w, P} = integral rho dw/dx
  const double expected = integrate(hadamard(s.rho, field([](double x) { return std::cos(x); })));
  CHECK(poisson_bracket(F, P, s) == doctest::Approx(expected).epsilon(1e-10));
  CHECK(poisson_bracket(F, F, s) == doctest::Approx(0.0));
  // Translation invariance of the free madelung Hamiltonian.
  const auto H = hamiltonian_functional(ring_model(Discretization::madelung));
  CHECK(std::abs(poisson_bracket(P, H, s)) < 1e-12);
  FunctionalHandle broken{"broken", F.value, {}, {}};
  CHECK_THROWS(poisson_bracket(broken, H, s));
}

TEST_CASE("amplitude flow conserves norm, energy and momentum") {
  const Model model = ring_model(Discretization::amplitude);
  const Trajectory tr = run(smooth_state(), model, 1e-3, 500, 50);
  CHECK(tr.states.size() == 11);
  CHECK(tr.states.back().time == doctest::Approx(0.5));
  const ConservationReport r = conservation_report(tr.states, model);
  CHECK(r.norm_drift < 1e-12);
  CHECK(r.H_drift < 1e-8);
  CHECK(r.P_drift[0] < 1e-10);
  std::ostringstream csv;
  write_conservation_csv(csv, r);
  CHECK(csv.str().rfind("t,norm,H,P_0\n", 0) == 0);
  CHECK_THROWS(conservation_report({tr.states.front()}, model));
}

TEST_CASE("harmonic ground state is stationary") {
  const Grid g({256}, {16.0});
  const double xi = 0.125, omega = 1.0;
  const double var = std::sqrt(8.0 * xi) / (2.0 * omega);
  FlowOptions o;
  o.discretization = Discretization::amplitude;
  const ParticleSystem sys = ParticleSystem::single(1.0);
  const Model model(sys, xi, Potential::harmonic({omega}).evaluate(g, sys), o);
  const CanonicalState s{normalize_density(sample(g, [&](const std::vector<double>& x) {
                           return std::exp(-x[0] * x[0] / (2.0 * var));
                         })),
                         GridField(g), 0.0};
  const CanonicalState end = run(s, model, 1e-3, 200, 200).states.back();
  CHECK(l2_distance(end.rho, s.rho) < 1e-6);
}

TEST_CASE("model and stepping guard rails") {
  CHECK_THROWS_AS(Model(ParticleSystem::single(1.0), -0.1, GridField(ring)), std::invalid_argument);
  CHECK_THROWS_AS(ring_model(Discretization::amplitude, 0.0), std::invalid_argument);
  CanonicalState bad = smooth_state();
  bad.Phi[3] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(step(bad, ring_model(Discretization::madelung), 1e-3, 7), DivergenceError);
  CHECK(stable_dt(smooth_state(), ring_model(Discretization::madelung)) > 0.0);
}

TEST_CASE("true path is stationary for the discrete action") {
  const Model model = ring_model(Discretization::amplitude);
  const double dt = 1e-3;
  const std::size_t steps = 20;
  const auto path = run(smooth_state(), model, dt, steps).states;
  PathPerturbation p;
  for (std::size_t n = 0; n <= steps; ++n) {
    const double env = n == 0 || n == steps ? 0.0 : std::sin(pi * n / static_cast<double>(steps));
    p.d_rho.push_back(field([](double x) { return std::cos(x); }) * (0.1 * env));
    p.d_Phi.push_back(field([](double x) { return std::sin(2.0 * x); }) * (0.1 * env));
  }
  const double res = std::abs(action_residual(path, model, dt, p));
  CHECK(res < 1e-3 * perturbation_norm(p, dt));

  PathPerturbation open = p;
  open.d_rho.front() = field([](double x) { return std::cos(x); });
  CHECK_THROWS(action_residual(path, model, dt, open));
  p.d_Phi.pop_back();
  CHECK_THROWS(action_residual(path, model, dt, p));
}
