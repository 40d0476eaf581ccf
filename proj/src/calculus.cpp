#include "edlab/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "edlab/errors.hpp"
#include "edlab/fourier.hpp"

namespace edlab {

double wrap_difference(double d, double period) {
  if (period <= 0.0) return d;
  return d - period * std::round(d / period);
}

namespace {

void check_axis(const GridField& f, std::size_t axis) {
  if (axis >= f.grid().dim())
    throw std::out_of_range("axis " + std::to_string(axis) + " out of range for a " +
                            std::to_string(f.grid().dim()) + "-dimensional grid");
}

GridField gradient_fourth_order(const GridField& f, std::size_t axis) {
  const Grid& g = f.grid();
  const double inv = 1.0 / (12.0 * g.spacing(axis));
  const double P = f.period();
  GridField out(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double c = f[i];
    const double p1 = wrap_difference(f[g.neighbor(i, axis, 1)] - c, P);
    const double m1 = wrap_difference(f[g.neighbor(i, axis, -1)] - c, P);
    const double p2 = wrap_difference(f[g.neighbor(i, axis, 2)] - c, P);
    const double m2 = wrap_difference(f[g.neighbor(i, axis, -2)] - c, P);
    out[i] = (8.0 * (p1 - m1) - (p2 - m2)) * inv;
  }
  return out;
}

GridField gradient_spectral(const GridField& f, std::size_t axis) {
  const Grid& g = f.grid();
  const std::size_t N = g.points(axis);
  const std::size_t stride = g.stride(axis);
  std::vector<complex> buf(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) buf[i] = f[i];

  // Angular fields: unwrap each line along `axis` and strip its winding ramp.
  std::vector<double> slope(g.size(), 0.0);
  if (f.is_angular()) {
    const double P = f.period();
    for (std::size_t start = 0; start < g.size(); ++start) {
      if (g.axis_index(start, axis) != 0) continue;
      double u = f[start];
      double total = 0.0;
      std::vector<double> unwrapped(N);
      unwrapped[0] = u;
      for (std::size_t j = 1; j < N; ++j) {
        const double d = wrap_difference(f[start + j * stride] - f[start + (j - 1) * stride], P);
        u += d;
        total += d;
        unwrapped[j] = u;
      }
      total += wrap_difference(f[start] - f[start + (N - 1) * stride], P);
      const double s = total / g.length(axis);
      for (std::size_t j = 0; j < N; ++j) {
        const std::size_t idx = start + j * stride;
        buf[idx] = unwrapped[j] - s * static_cast<double>(j) * g.spacing(axis);
        slope[idx] = s;
      }
    }
  }

  FourierTransform fft(g);
  fft.forward(buf);
  for (std::size_t i = 0; i < g.size(); ++i) {
    buf[i] = fft.is_nyquist(i, axis) ? complex{} : buf[i] * complex(0.0, fft.wavenumber(i, axis));
  }
  fft.backward(buf);
  GridField out(g);
  for (std::size_t i = 0; i < g.size(); ++i) out[i] = buf[i].real() + slope[i];
  return out;
}

}  // namespace

GridField gradient(const GridField& field, std::size_t axis, DerivativeScheme scheme) {
  check_axis(field, axis);
  return scheme == DerivativeScheme::spectral ? gradient_spectral(field, axis) : gradient_fourth_order(field, axis);
}

GridField second_derivative(const GridField& field, std::size_t axis, DerivativeScheme scheme) {
  return gradient(gradient(field, axis, scheme), axis, scheme);
}

double integrate(const GridField& field) {
  double s = 0.0;
  for (double v : field.values()) s += v;
  return s * field.grid().cell_volume();
}

double inner_product(const GridField& a, const GridField& b) {
  require_same_grid(a.grid(), b.grid(), "inner_product");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s * a.grid().cell_volume();
}

double interpolate(const GridField& field, std::span<const double> point) {
  const Grid& g = field.grid();
  const std::size_t D = g.dim();
  if (point.size() != D) throw DimensionMismatch("interpolate: point has wrong dimension");
  std::vector<std::size_t> base(D);
  std::vector<double> frac(D);
  for (std::size_t a = 0; a < D; ++a) {
    const double s = (g.wrap(a, point[a]) + 0.5 * g.length(a)) / g.spacing(a);
    double fl = std::floor(s);
    frac[a] = s - fl;
    long i0 = static_cast<long>(fl) % static_cast<long>(g.points(a));
    if (i0 < 0) i0 += static_cast<long>(g.points(a));
    base[a] = static_cast<std::size_t>(i0);
  }
  const std::size_t origin = g.flatten(base);
  const double ref = field[origin];
  double acc = 0.0;
  const std::size_t corners = std::size_t{1} << D;
  for (std::size_t c = 0; c < corners; ++c) {
    double w = 1.0;
    std::size_t idx = origin;
    for (std::size_t a = 0; a < D; ++a) {
      if (c & (std::size_t{1} << a)) {
        w *= frac[a];
        idx = g.neighbor(idx, a, 1);
      } else {
        w *= 1.0 - frac[a];
      }
    }
    if (w != 0.0) acc += w * wrap_difference(field[idx] - ref, field.period());
  }
  return ref + acc;
}

GridField normalize_density(const GridField& rho) {
  const double n = integrate(rho);
  if (!(n > 0.0) || !std::isfinite(n)) throw std::invalid_argument("cannot normalize a density with non-positive mass");
  return rho * (1.0 / n);
}

double density_floor(const GridField& rho, double relative) {
  return relative * std::max(rho.max(), 0.0);
}

std::size_t count_isolated_dips(const GridField& rho, double floor, std::size_t window, double contrast) {
  const Grid& g = rho.grid();
  const double bracket = contrast * floor;
  std::size_t count = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (rho[i] >= floor) continue;
    bool dip = false;
    for (std::size_t a = 0; a < g.dim() && !dip; ++a) {
      bool left = false;
      bool right = false;
      for (std::size_t s = 1; s <= window; ++s) {
        left = left || rho[g.neighbor(i, a, -static_cast<long>(s))] >= bracket;
        right = right || rho[g.neighbor(i, a, static_cast<long>(s))] >= bracket;
      }
      dip = left && right;
    }
    if (dip) ++count;
  }
  return count;
}

void require_resolved(const GridField& rho, double floor, const char* context, double max_fraction) {
  const std::size_t flagged = count_isolated_dips(rho, floor);
  if (static_cast<double>(flagged) > max_fraction * static_cast<double>(rho.size()))
    throw UnderResolvedError(std::string(context) + ": density below floor on too many isolated points", flagged,
                             rho.size());
}

}  // namespace edlab
