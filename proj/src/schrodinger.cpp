#include "edlab/schrodinger.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

#include "edlab/calculus.hpp"
#include "edlab/errors.hpp"
#include "edlab/fourier.hpp"

namespace edlab::schrodinger {

namespace {

using std::numbers::pi;

// Yoshida triple-jump weights.
const double kW1 = 1.0 / (2.0 - std::cbrt(2.0));
const double kW0 = -std::cbrt(2.0) / (2.0 - std::cbrt(2.0));

class SplitStep {
 public:
  SplitStep(const WaveField& psi, const GridField& V, const ParticleSystem& system)
      : fft_(psi.grid()), V_(V), hbar_(psi.hbar()), k2_(psi.grid().size(), 0.0) {
    const Grid& g = psi.grid();
    require_same_grid(g, V.grid(), "split-step solver");
    if (g.dim() != system.config_dim()) throw DimensionMismatch("split-step solver: grid and system dimensions differ");
    for (std::size_t i = 0; i < g.size(); ++i) {
      for (std::size_t A = 0; A < g.dim(); ++A) {
        const double q = fft_.wavenumber(i, A);
        k2_[i] += q * q * system.inverse_mass(A);
      }
    }
  }

  const FourierTransform& fft() const { return fft_; }

  void potential(std::span<complex> psi, double tau) const {
    for (std::size_t i = 0; i < psi.size(); ++i) psi[i] *= std::polar(1.0, -tau * V_[i] / hbar_);
  }

  void kinetic(std::span<complex> psi, double tau) const {
    fft_.forward(psi);
    for (std::size_t i = 0; i < psi.size(); ++i) psi[i] *= std::polar(1.0, -0.5 * hbar_ * k2_[i] * tau);
    fft_.backward(psi);
  }

  void strang(std::span<complex> psi, double tau) const {
    potential(psi, 0.5 * tau);
    kinetic(psi, tau);
    potential(psi, 0.5 * tau);
  }

 private:
  FourierTransform fft_;
  const GridField& V_;
  double hbar_;
  std::vector<double> k2_;
};

template <class Step>
void yoshida(Step&& s, double dt) {
  s(kW1 * dt);
  s(kW0 * dt);
  s(kW1 * dt);
}

void check_finite(std::span<const complex> psi, std::size_t step, const char* what) {
  for (const complex& z : psi) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw DivergenceError(what, step);
  }
}

}  // namespace

double nonlinear_coefficient(double k, double xi, double eta) {
  const double a = eta * eta / (2.0 * k * k);
  const double b = 4.0 * xi;
  // Cancellation down to a few ulps means k sits at the regraduated value;
  // the leftover is rounding in k^2, not physics.
  if (std::abs(a - b) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(a, b)) return 0.0;
  return a - b;
}

Regraduation regraduate(double xi, double eta) {
  if (!(xi > 0.0)) throw std::invalid_argument("regraduate: xi must be positive (xi <= 0 is not a linear theory here)");
  if (!(eta > 0.0)) throw std::invalid_argument("regraduate: eta must be positive");
  Regraduation r{xi, eta, std::sqrt(eta * eta / (8.0 * xi)), std::sqrt(8.0 * xi)};
  return r;
}

WaveField compose_psi(const hamiltonian::CanonicalState& state, double k, double eta) {
  if (!(k > 0.0)) throw std::invalid_argument("compose_psi: k must be positive");
  if (!(eta > 0.0)) throw std::invalid_argument("compose_psi: eta must be positive");
  require_same_grid(state.rho.grid(), state.Phi.grid(), "compose_psi");
  std::vector<complex> v(state.rho.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (state.rho[i] < 0.0) throw std::invalid_argument("compose_psi: negative density at node " + std::to_string(i));
    v[i] = std::polar(std::sqrt(state.rho[i]), k * state.Phi[i] / eta);
  }
  return WaveField(state.rho.grid(), std::move(v), k, eta);
}

Decomposition decompose_psi(const WaveField& psi, double floor_relative) {
  const Grid& g = psi.grid();
  GridField rho = psi.density();
  const std::size_t nodes = count_isolated_dips(rho, density_floor(rho, floor_relative));
  if (static_cast<double>(nodes) > 0.01 * static_cast<double>(g.size()))
    throw UnderResolvedError("decompose_psi: too many nodes for a reliable phase unwrap", nodes, g.size());

  const double scale = psi.hbar();
  std::vector<double> theta(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) theta[i] = std::arg(psi[i]);
  std::vector<double> unwrapped(g.size());
  unwrapped[0] = theta[0];
  for (std::size_t f = 1; f < g.size(); ++f) {
    std::size_t axis = g.dim() - 1;
    while (g.axis_index(f, axis) == 0) --axis;
    const std::size_t prev = f - g.stride(axis);
    unwrapped[f] = unwrapped[prev] + wrap_difference(theta[f] - theta[prev], 2.0 * pi);
  }
  GridField Phi(g, std::vector<double>(g.size()), 2.0 * pi * scale);
  for (std::size_t i = 0; i < g.size(); ++i) Phi[i] = scale * unwrapped[i];
  return {{std::move(rho), std::move(Phi), 0.0}, nodes, 0};
}

WaveField evolve_linear(const WaveField& psi, const GridField& V, const ParticleSystem& system, double dt,
                        std::size_t steps) {
  if (!(dt > 0.0)) throw std::invalid_argument("evolve_linear: dt must be positive");
  const SplitStep ss(psi, V, system);
  WaveField out = psi;
  auto data = out.values();
  for (std::size_t n = 1; n <= steps; ++n) {
    yoshida([&](double tau) { ss.strang(data, tau); }, dt);
    check_finite(data, n, "linear Schrodinger evolution diverged");
  }
  return out;
}

WaveField evolve_nonlinear(const WaveField& psi, double xi, const GridField& V, const ParticleSystem& system, double dt,
                           std::size_t steps, double floor_relative) {
  if (xi < 0.0) throw std::invalid_argument("evolve_nonlinear: xi < 0 is excluded");
  if (!(dt > 0.0)) throw std::invalid_argument("evolve_nonlinear: dt must be positive");
  const double c = nonlinear_coefficient(psi.k(), xi, psi.eta());
  const SplitStep ss(psi, V, system);
  const Grid& g = psi.grid();
  const double hbar = psi.hbar();
  WaveField out = psi;
  auto data = out.values();
  std::vector<complex> mod(g.size());

  auto rotate = [&](double tau) {
    double peak = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      mod[i] = std::abs(data[i]);
      peak = std::max(peak, std::norm(data[i]));
    }
    const double floor = floor_relative * peak;
    std::vector<double> U(g.size(), 0.0);
    ss.fft().forward(mod);
    std::vector<complex> lap(g.size());
    for (std::size_t A = 0; A < g.dim(); ++A) {
      for (std::size_t i = 0; i < g.size(); ++i) {
        const double q = ss.fft().wavenumber(i, A);
        lap[i] = mod[i] * (-q * q);
      }
      ss.fft().backward(lap);
      for (std::size_t i = 0; i < g.size(); ++i) {
        const double r2 = std::norm(data[i]);
        if (r2 >= floor && r2 > 0.0) U[i] += system.inverse_mass(A) * lap[i].real() / std::sqrt(r2);
      }
    }
    for (std::size_t i = 0; i < g.size(); ++i) data[i] *= std::polar(1.0, -tau * c * U[i] / hbar);
  };

  auto symmetric = [&](double tau) {
    if (c == 0.0) {
      ss.strang(data, tau);
      return;
    }
    ss.strang(data, 0.5 * tau);
    rotate(tau);
    ss.strang(data, 0.5 * tau);
  };

  // The pointwise rotation shears high-wavenumber amplitude perturbations into
  // the phase at rate |c| q^2 / (hbar m); the explicit splitting needs that
  // times the largest Yoshida sub-step to stay below one.
  double stiffness = 0.0;
  for (std::size_t A = 0; A < g.dim(); ++A) {
    const double q = pi / g.spacing(A);
    stiffness += std::abs(c) * q * q * system.inverse_mass(A) / hbar;
  }
  const double substeps = std::max(1.0, std::ceil(dt * std::abs(kW0) * stiffness));
  const double tau = dt / substeps;

  for (std::size_t n = 1; n <= steps; ++n) {
    for (double s = 0; s < substeps; ++s) yoshida(symmetric, tau);
    check_finite(data, n, "nonlinear Schrodinger evolution diverged");
  }
  return out;
}

Winding phase_winding(const GridField& Phi, std::size_t axis, double period) {
  const Grid& g = Phi.grid();
  if (axis >= g.dim()) throw std::out_of_range("phase_winding: axis out of range");
  const double P = period > 0.0 ? period : Phi.period();
  if (!(P > 0.0)) throw std::invalid_argument("phase_winding: Phi has no period");
  const GridField angular = Phi.is_angular() && Phi.period() == P ? Phi : Phi.with_period(P);
  const GridField d = gradient(angular, axis);

  std::vector<std::size_t> idx(g.dim());
  for (std::size_t A = 0; A < g.dim(); ++A) idx[A] = g.points(A) / 2;
  idx[axis] = 0;
  const std::size_t start = g.flatten(idx);
  double total = 0.0;
  for (std::size_t j = 0; j < g.points(axis); ++j) total += d[start + j * g.stride(axis)];
  total *= g.spacing(axis);

  Winding w;
  w.raw = total / P;
  w.winding = std::lround(w.raw);
  w.distance = std::abs(w.raw - static_cast<double>(w.winding));
  if (w.distance > 0.25)
    throw Error("phase_winding: accumulated phase is " + std::to_string(w.raw) +
                " periods, too far from an integer (under-resolved phase)");
  return w;
}

void write_wave_csv(std::ostream& out, const WaveField& psi) {
  const Grid& g = psi.grid();
  for (std::size_t A = 0; A < g.dim(); ++A) out << 'x' << A << ',';
  out << "rho,phi,re_psi,im_psi\n";
  const auto old = out.precision(17);
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t A = 0; A < g.dim(); ++A) out << g.node_coordinate(i, A) << ',';
    out << std::norm(psi[i]) << ',' << psi.hbar() * std::arg(psi[i]) << ',' << psi[i].real() << ',' << psi[i].imag()
        << '\n';
  }
  out.precision(old);
}

}  // namespace edlab::schrodinger
