#include "edlab/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

#include "edlab/calculus.hpp"
#include "edlab/errors.hpp"

namespace edlab::stochastic {

namespace {

constexpr std::uint64_t kInitCounter = std::numeric_limits<std::uint64_t>::max();

void check_box(const WalkerEnsemble& ens, const Grid& g, const char* context) {
  if (g.dim() != ens.dim()) throw DimensionMismatch(std::string(context) + ": grid and ensemble dimensions differ");
  for (std::size_t A = 0; A < g.dim(); ++A) {
    if (std::abs(g.length(A) - ens.box().length(A)) > 1e-12 * g.length(A))
      throw DimensionMismatch(std::string(context) + ": grid does not cover the ensemble box");
  }
}

// Circular convolution along one axis with a truncated, renormalized Gaussian.
GridField smooth_axis(const GridField& f, std::size_t axis, double bandwidth) {
  const Grid& g = f.grid();
  const double h = g.spacing(axis);
  const long n = static_cast<long>(g.points(axis));
  const long reach = std::min<long>(static_cast<long>(std::ceil(5.0 * bandwidth / h)), n / 2);
  std::vector<double> w(2 * reach + 1);
  double total = 0.0;
  for (long j = -reach; j <= reach; ++j) {
    const double u = j * h / bandwidth;
    w[j + reach] = std::exp(-0.5 * u * u);
    total += w[j + reach];
  }
  GridField out(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    double acc = 0.0;
    for (long j = -reach; j <= reach; ++j) acc += w[j + reach] * f[g.neighbor(i, axis, j)];
    out[i] = acc / total;
  }
  return out;
}

}  // namespace

WalkerEnsemble::WalkerEnsemble(ParticleSystem system, Grid box, std::vector<double> positions,
                               std::uint64_t master_seed)
    : system_(std::move(system)), box_(std::move(box)), positions_(std::move(positions)), master_seed_(master_seed) {
  const std::size_t D = box_.dim();
  if (D != system_.config_dim()) throw DimensionMismatch("walker ensemble: box and system dimensions differ");
  if (positions_.size() % D != 0)
    throw DimensionMismatch("walker ensemble: " + std::to_string(positions_.size()) +
                            " coordinates is not a multiple of D = " + std::to_string(D));
  for (std::size_t i = 0; i < positions_.size(); ++i) {
    if (!std::isfinite(positions_[i])) throw std::invalid_argument("walker ensemble: non-finite position");
    positions_[i] = box_.wrap(i % D, positions_[i]);
  }
  last_drift_.assign(positions_.size(), 0.0);
}

bool WalkerEnsemble::operator==(const WalkerEnsemble& other) const {
  return system_ == other.system_ && box_ == other.box_ && positions_ == other.positions_ &&
         master_seed_ == other.master_seed_ && steps_ == other.steps_;
}

WalkerEnsemble sample_from_density(const ParticleSystem& system, const GridField& rho, std::size_t walkers,
                                   std::uint64_t master_seed) {
  const Grid& g = rho.grid();
  if (g.dim() != system.config_dim()) throw DimensionMismatch("sample_from_density: grid and system dimensions differ");
  std::vector<double> cdf(g.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (rho[i] < 0.0 || !std::isfinite(rho[i])) throw std::invalid_argument("sample_from_density: invalid density");
    acc += rho[i];
    cdf[i] = acc;
  }
  if (!(acc > 0.0)) throw std::invalid_argument("sample_from_density: density has no mass");
  const std::size_t D = g.dim();
  std::vector<double> pos(walkers * D);
  for (std::size_t w = 0; w < walkers; ++w) {
    CounterRng rng(master_seed, w, kInitCounter);
    const double u = rng.uniform() * acc;
    const std::size_t node = std::min<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin(), g.size() - 1);
    for (std::size_t A = 0; A < D; ++A)
      pos[w * D + A] = g.node_coordinate(node, A) + (rng.uniform() - 0.5) * g.spacing(A);
  }
  return WalkerEnsemble(system, g, std::move(pos), master_seed);
}

WalkerEnsemble point_ensemble(const ParticleSystem& system, const Grid& box, std::span<const double> point,
                              std::size_t walkers, std::uint64_t master_seed) {
  if (point.size() != box.dim()) throw DimensionMismatch("point_ensemble: point has wrong dimension");
  std::vector<double> pos;
  pos.reserve(walkers * point.size());
  for (std::size_t w = 0; w < walkers; ++w) pos.insert(pos.end(), point.begin(), point.end());
  return WalkerEnsemble(system, box, std::move(pos), master_seed);
}

WalkerEnsemble sample_step(const WalkerEnsemble& ensemble, const maxent::TransitionKernel& kernel) {
  if (!(kernel.system() == ensemble.system())) throw DimensionMismatch("sample_step: kernel and ensemble systems differ");
  check_box(ensemble, kernel.grid(), "sample_step");
  WalkerEnsemble next = ensemble;
  const std::size_t D = ensemble.dim();
  next.advance(kernel.dt(), [&](std::span<const double> x, std::span<double> b) {
    for (std::size_t A = 0; A < D; ++A) b[A] = interpolate(kernel.mean_field(A), x);
  });
  return next;
}

std::vector<GridField> coupled_drift(const ParticleSystem& system, const GridField& rho, const GridField& Phi,
                                     double floor_relative) {
  require_same_grid(rho.grid(), Phi.grid(), "coupled_drift");
  const Grid& g = rho.grid();
  if (g.dim() != system.config_dim()) throw DimensionMismatch("coupled_drift: grid and system dimensions differ");
  const double floor = density_floor(rho, floor_relative);
  require_resolved(rho, floor, "coupled_drift");
  std::vector<GridField> b;
  for (std::size_t A = 0; A < g.dim(); ++A) {
    const GridField dphi = gradient(Phi, A);
    const GridField drho = gradient(rho, A);
    const double inv_m = system.inverse_mass(A);
    GridField bA(g);
    for (std::size_t i = 0; i < g.size(); ++i)
      bA[i] = inv_m * dphi[i] + 0.5 * system.eta() * inv_m * drho[i] / std::max(rho[i], floor);
    b.push_back(std::move(bA));
  }
  return b;
}

WalkerEnsemble evolve_ensemble_coupled(const WalkerEnsemble& ensemble, const GridField& rho, const GridField& Phi,
                                       double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("evolve_ensemble_coupled: dt must be positive");
  check_box(ensemble, rho.grid(), "evolve_ensemble_coupled");
  const std::vector<GridField> b = coupled_drift(ensemble.system(), rho, Phi);
  WalkerEnsemble next = ensemble;
  next.advance(dt, [&](std::span<const double> x, std::span<double> out) {
    for (std::size_t A = 0; A < b.size(); ++A) out[A] = dt * interpolate(b[A], x);
  });
  return next;
}

DensityEstimate estimate_density(const WalkerEnsemble& ensemble, const Grid& grid, double bandwidth) {
  if (ensemble.walkers() == 0) throw std::invalid_argument("estimate_density: empty ensemble");
  if (ensemble.walkers() < 100) throw std::invalid_argument("estimate_density: needs at least 100 walkers");
  if (bandwidth < 0.0) throw std::invalid_argument("estimate_density: negative bandwidth");
  check_box(ensemble, grid, "estimate_density");
  const std::size_t D = grid.dim();
  GridField hist(grid);
  std::vector<std::size_t> idx(D);
  for (std::size_t w = 0; w < ensemble.walkers(); ++w) {
    const auto x = ensemble.position(w);
    for (std::size_t A = 0; A < D; ++A) {
      const double u = (x[A] + 0.5 * grid.length(A)) / grid.spacing(A);
      const long n = static_cast<long>(grid.points(A));
      long k = static_cast<long>(std::floor(u + 0.5)) % n;
      if (k < 0) k += n;
      idx[A] = static_cast<std::size_t>(k);
    }
    hist[grid.flatten(idx)] += 1.0;
  }
  hist *= 1.0 / (static_cast<double>(ensemble.walkers()) * grid.cell_volume());
  if (bandwidth > 0.0) {
    for (std::size_t A = 0; A < D; ++A) hist = smooth_axis(hist, A, bandwidth);
  }
  return {hist, bandwidth, ensemble.walkers()};
}

MomentReport empirical_moments(const WalkerEnsemble& before, const WalkerEnsemble& after) {
  if (before.walkers() != after.walkers())
    throw DimensionMismatch("empirical_moments: walker counts differ (" + std::to_string(before.walkers()) + " vs " +
                            std::to_string(after.walkers()) + ")");
  if (before.dim() != after.dim()) throw DimensionMismatch("empirical_moments: dimensions differ");
  const std::size_t D = before.dim();
  const std::size_t M = before.walkers();
  if (M < 2) throw std::invalid_argument("empirical_moments: need at least two walkers");
  const bool one_step = after.steps() == before.steps() + 1;
  const bool same = after.steps() == before.steps();

  std::vector<double> disp(M * D);
  for (std::size_t w = 0; w < M; ++w)
    for (std::size_t A = 0; A < D; ++A)
      disp[w * D + A] = before.box().minimum_image(A, before.position(w)[A], after.position(w)[A]);

  const double Md = static_cast<double>(M);
  MomentReport r;
  for (std::size_t A = 0; A < D; ++A) {
    double s = 0.0, s2 = 0.0;
    for (std::size_t w = 0; w < M; ++w) {
      s += disp[w * D + A];
      s2 += disp[w * D + A] * disp[w * D + A];
    }
    const double mean = s / Md;
    r.empirical_mean.push_back(mean);
    r.mean_standard_error.push_back(std::sqrt(std::max(s2 / Md - mean * mean, 0.0) / (Md - 1.0)));

    double c = 0.0, c2 = 0.0;
    for (std::size_t w = 0; w < M; ++w) {
      double centre = mean;
      if (one_step) centre = after.last_drift()[w * D + A];
      if (same) centre = 0.0;
      const double dev = disp[w * D + A] - centre;
      c += dev * dev;
      c2 += dev * dev * dev * dev;
    }
    const double cov = one_step || same ? c / Md : c / (Md - 1.0);
    r.empirical_cov.push_back(cov);
    const double m2 = c / Md;
    r.cov_standard_error.push_back(std::sqrt(std::max(c2 / Md - m2 * m2, 0.0) / (Md - 1.0)));
  }
  return r;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("loglog_slope: need two or more paired points");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw std::invalid_argument("loglog_slope: values must be positive");
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ScalingFit fit_step_scaling(const WalkerEnsemble& initial, const GridField& phi, std::span<const double> dts) {
  ScalingFit fit;
  const std::size_t D = initial.dim();
  for (const double dt : dts) {
    const maxent::TransitionKernel kernel(initial.system(), phi, dt);
    const WalkerEnsemble after = sample_step(initial, kernel);
    const MomentReport m = empirical_moments(initial, after);
    double drift = 0.0, fluct = 0.0;
    for (std::size_t A = 0; A < D; ++A) {
      drift += m.empirical_mean[A] * m.empirical_mean[A];
      fluct += m.empirical_cov[A];
    }
    fit.dts.push_back(dt);
    fit.mean_abs_drift.push_back(std::sqrt(drift));
    fit.fluctuation_rms.push_back(std::sqrt(fluct));
  }
  fit.drift_exponent = loglog_slope(fit.dts, fit.mean_abs_drift);
  fit.fluctuation_exponent = loglog_slope(fit.dts, fit.fluctuation_rms);
  return fit;
}

void write_trajectory_header(std::ostream& out, std::size_t dim) {
  out << "step,walker_id";
  for (std::size_t A = 0; A < dim; ++A) out << ",x" << A;
  out << '\n';
}

void append_trajectory(std::ostream& out, const WalkerEnsemble& ensemble) {
  const auto old = out.precision(17);
  for (std::size_t w = 0; w < ensemble.walkers(); ++w) {
    out << ensemble.steps() << ',' << w;
    for (const double x : ensemble.position(w)) out << ',' << x;
    out << '\n';
  }
  out.precision(old);
}

}  // namespace edlab::stochastic
