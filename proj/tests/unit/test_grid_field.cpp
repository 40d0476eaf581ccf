#include <doctest.h>

#include <cmath>
#include <numbers>

#include "edlab/errors.hpp"
#include "edlab/field.hpp"
#include "edlab/particle_system.hpp"
#include "edlab/potential.hpp"

using namespace edlab;

TEST_CASE("grid layout is row-major with periodic neighbours") {
  const Grid g({4, 3}, {2.0, 3.0});
  CHECK(g.size() == 12);
  CHECK(g.stride(0) == 3);
  CHECK(g.stride(1) == 1);
  CHECK(g.spacing(0) == doctest::Approx(0.5));
  CHECK(g.cell_volume() == doctest::Approx(0.5));
  CHECK(g.coordinate(0, 0) == doctest::Approx(-1.0));
  CHECK(g.coordinate(1, 2) == doctest::Approx(0.5));

  const std::size_t idx[] = {3, 2};
  const std::size_t flat = g.flatten(idx);
  CHECK(flat == 11);
  CHECK(g.unflatten(flat) == std::vector<std::size_t>{3, 2});
  CHECK(g.neighbor(flat, 0, 1) == 2);
  CHECK(g.neighbor(flat, 1, 1) == 9);
  CHECK(g.neighbor(0, 0, -1) == 9);
  CHECK(g.neighbor(0, 1, -4) == 2);
}

TEST_CASE("wrap and minimum image") {
  const Grid g({10}, {2.0});
  CHECK(g.wrap(0, 1.0) == doctest::Approx(-1.0));
  CHECK(g.wrap(0, 2.3) == doctest::Approx(0.3));
  CHECK(g.wrap(0, -1.2) == doctest::Approx(0.8));
  CHECK(g.minimum_image(0, 0.9, -0.9) == doctest::Approx(0.2));
  CHECK(g.minimum_image(0, -0.9, 0.9) == doctest::Approx(-0.2));
  const double inside[] = {0.99};
  const double edge[] = {1.0};
  CHECK(g.contains(inside));
  CHECK_FALSE(g.contains(edge));
}

TEST_CASE("grid rejects malformed input") {
  CHECK_THROWS_AS(Grid({}, {}), std::invalid_argument);
  CHECK_THROWS_AS(Grid({4}, {1.0, 2.0}), std::invalid_argument);
  CHECK_THROWS_AS(Grid({0}, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(Grid({4}, {-1.0}), std::invalid_argument);
  CHECK_THROWS_AS(require_same_grid(Grid({4}, {1.0}), Grid({5}, {1.0}), "t"), DimensionMismatch);
}

TEST_CASE("field arithmetic and distances") {
  const Grid g({4}, {4.0});
  const GridField a(g, {1.0, 2.0, 3.0, 4.0});
  const GridField b(g, 1.0);
  const GridField c = a - b;
  CHECK(c[0] == 0.0);
  CHECK(c[3] == 3.0);
  CHECK((2.0 * a)[1] == 4.0);
  CHECK(hadamard(a, a)[2] == 9.0);
  CHECK(l1_distance(a, b) == doctest::Approx(6.0));
  CHECK(l2_distance(a, b) == doctest::Approx(std::sqrt(14.0)));
  CHECK(max_abs_difference(a, b) == 3.0);
  CHECK(a.max() == 4.0);
  CHECK(a.min() == 1.0);
  CHECK_THROWS_AS(GridField(g, {1.0, 2.0}), DimensionMismatch);
  CHECK_THROWS_AS(GridField(g, {1.0, 2.0, 3.0, 4.0}, -1.0), std::invalid_argument);
}

TEST_CASE("wave field density and normalization") {
  const Grid g({4}, {2.0});
  const WaveField psi(g, {{1.0, 1.0}, {0.0, 2.0}, {0.0, 0.0}, {1.0, 0.0}}, 2.0, 1.0);
  CHECK(psi.hbar() == doctest::Approx(0.5));
  CHECK(psi.density()[0] == doctest::Approx(2.0));
  CHECK(psi.norm() == doctest::Approx(0.5 * 7.0));
  CHECK(psi.normalized().norm() == doctest::Approx(1.0));
}

TEST_CASE("particle system axes") {
  const ParticleSystem s({1.0, 4.0}, 0.5, 2);
  CHECK(s.config_dim() == 4);
  CHECK(s.particle_of_axis(3) == 1);
  CHECK(s.axis_mass(2) == 4.0);
  CHECK(s.inverse_mass(1) == 1.0);
  CHECK_THROWS_AS(ParticleSystem({-1.0}), std::invalid_argument);
  CHECK_THROWS_AS(ParticleSystem({1.0}, 0.0), std::invalid_argument);
}

TEST_CASE("potentials evaluate to their closed forms") {
  const Grid g({8}, {4.0});
  const ParticleSystem s = ParticleSystem::single(2.0);
  const GridField V = Potential::harmonic({3.0}).evaluate(g, s);
  // m omega^2 x^2 / 2 at x = -2.
  CHECK(V[0] == doctest::Approx(0.5 * 2.0 * 9.0 * 4.0));
  CHECK(V[4] == doctest::Approx(0.0));
  Potential dw;
  dw.kind = PotentialKind::double_well;
  dw.separation = 2.0;
  dw.depth = 1.5;
  const GridField W = dw.evaluate(g, s);
  CHECK(W[4] == doctest::Approx(1.5));  // barrier top at the origin
  CHECK(W[2] == doctest::Approx(0.0));  // well bottom at x = -1
  Potential bad;
  bad.kind = PotentialKind::custom_table;
  bad.table = {1.0, 2.0};
  CHECK_THROWS(bad.evaluate(g, s));
  CHECK(potential_kind_from_string(to_string(PotentialKind::barrier)) == PotentialKind::barrier);
}
