#include <doctest.h>

#include <cmath>
#include <functional>
#include <numbers>

#include "edlab/calculus.hpp"
#include "edlab/errors.hpp"

using namespace edlab;
using std::numbers::pi;

namespace {

GridField sin_field(const Grid& g, double k) {
  return sample(g, [k](const std::vector<double>& x) { return std::sin(k * x[0]); });
}

double max_error(const GridField& f, const std::function<double(double)>& exact) {
  double e = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) e = std::max(e, std::abs(f[i] - exact(f.grid().node_coordinate(i, 0))));
  return e;
}

}  // namespace

TEST_CASE("spectral derivative is exact for band-limited fields") {
  const Grid g({32}, {2.0 * pi});
  const GridField d = gradient(sin_field(g, 3.0), 0, DerivativeScheme::spectral);
  CHECK(max_error(d, [](double x) { return 3.0 * std::cos(3.0 * x); }) < 1e-12);
  const GridField d2 = second_derivative(sin_field(g, 3.0), 0, DerivativeScheme::spectral);
  CHECK(max_error(d2, [](double x) { return -9.0 * std::sin(3.0 * x); }) < 1e-11);
}

TEST_CASE("fourth-order stencil converges at fourth order") {
  double errors[2];
  const std::size_t sizes[2] = {32, 64};
  for (int r = 0; r < 2; ++r) {
    const Grid g({sizes[r]}, {2.0 * pi});
    errors[r] = max_error(gradient(sin_field(g, 2.0), 0), [](double x) { return 2.0 * std::cos(2.0 * x); });
  }
  const double order = std::log2(errors[0] / errors[1]);
  CHECK(order == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("derivative along the second axis of a 2-D grid") {
  const Grid g({16, 24}, {2.0 * pi, 2.0 * pi});
  const GridField f = sample(g, [](const std::vector<double>& x) { return std::cos(x[0]) * std::sin(2.0 * x[1]); });
  const GridField d = gradient(f, 1, DerivativeScheme::spectral);
  double e = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto x = g.node_position(i);
    e = std::max(e, std::abs(d[i] - 2.0 * std::cos(x[0]) * std::cos(2.0 * x[1])));
  }
  CHECK(e < 1e-12);
  CHECK_THROWS_AS(gradient(f, 2), std::out_of_range);
}

TEST_CASE("angular fields are differentiated through wrapped differences") {
  const double L = 2.0 * pi;
  const Grid g({32}, {L});
  // A winding-one ramp stored modulo the period.
  GridField ramp = GridField(g).with_period(L);
  for (std::size_t i = 0; i < g.size(); ++i) ramp[i] = g.wrap(0, g.node_coordinate(i, 0));
  for (auto scheme : {DerivativeScheme::fourth_order, DerivativeScheme::spectral}) {
    const GridField d = gradient(ramp, 0, scheme);
    CHECK(max_error(d, [](double) { return 1.0; }) < 1e-10);
  }
  CHECK(wrap_difference(0.9 * L, L) == doctest::Approx(-0.1 * L));
  CHECK(wrap_difference(0.3, 0.0) == 0.3);
}

TEST_CASE("quadrature, normalization and interpolation") {
  const Grid g({64}, {2.0 * pi});
  const GridField f = sample(g, [](const std::vector<double>& x) { return 1.0 + std::cos(x[0]); });
  CHECK(integrate(f) == doctest::Approx(2.0 * pi));
  CHECK(inner_product(sin_field(g, 1.0), sin_field(g, 1.0)) == doctest::Approx(pi));
  CHECK(integrate(normalize_density(f)) == doctest::Approx(1.0));
  CHECK(density_floor(f, 0.5) == doctest::Approx(1.0));

  const Grid lin({4}, {4.0});
  const GridField ramp(lin, {0.0, 1.0, 2.0, 3.0});
  const double mid[] = {-1.5};
  const double across[] = {1.5};  // between the last node and the wrapped first
  CHECK(interpolate(ramp, mid) == doctest::Approx(0.5));
  CHECK(interpolate(ramp, across) == doctest::Approx(1.5));
}

TEST_CASE("isolated dip detection") {
  const Grid g({64}, {8.0});
  GridField rho = sample(g, [](const std::vector<double>& x) { return std::exp(-x[0] * x[0]); });
  const double floor = density_floor(rho, 1e-8);
  CHECK(count_isolated_dips(rho, floor) == 0);
  CHECK_NOTHROW(require_resolved(rho, floor, "test"));

  rho[32] = 0.0;  // hole at the peak
  rho[30] = 0.0;
  CHECK(count_isolated_dips(rho, floor) == 2);
  CHECK_THROWS_AS(require_resolved(rho, floor, "test"), UnderResolvedError);
}
