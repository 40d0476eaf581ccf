#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "edlab/field.hpp"
#include "edlab/maxent.hpp"
#include "edlab/particle_system.hpp"

/// Walker ensembles driven by the Euler-Maruyama discretization of
/// dx = b dt + dw with <dw_A dw_B> = eta m^AB dt.
namespace edlab::stochastic {

/// M walkers in the periodic box of `box`. Positions are stored walker-major
/// (walker w, axis A at w*D + A). Walker w draws its noise for step s from the
/// counter stream (master_seed, w, s), so results do not depend on visiting order.
class WalkerEnsemble {
 public:
  /// Positions are wrapped into the box. Throws DimensionMismatch when the box
  /// dimension differs from the system or positions.size() is not a multiple of D.
  WalkerEnsemble(ParticleSystem system, Grid box, std::vector<double> positions, std::uint64_t master_seed);

  const ParticleSystem& system() const { return system_; }
  const Grid& box() const { return box_; }
  std::size_t dim() const { return box_.dim(); }
  std::size_t walkers() const { return dim() == 0 ? 0 : positions_.size() / dim(); }
  std::uint64_t master_seed() const { return master_seed_; }
  /// Number of steps taken since construction.
  std::uint64_t steps() const { return steps_; }

  std::span<const double> positions() const { return positions_; }
  std::span<const double> position(std::size_t walker) const { return {positions_.data() + walker * dim(), dim()}; }
  /// Deterministic part b*dt of the most recent step (zero before the first).
  std::span<const double> last_drift() const { return last_drift_; }

  /// Advance one step: x += drift_w + sqrt(eta dt / m_A) * N(0,1), then wrap.
  /// `drift(x, out)` writes the deterministic displacement for a walker at x.
  template <class Drift>
  void advance(double dt, Drift&& drift);

  bool operator==(const WalkerEnsemble& other) const;

 private:
  ParticleSystem system_;
  Grid box_;
  std::vector<double> positions_;
  std::vector<double> last_drift_;
  std::uint64_t master_seed_;
  std::uint64_t steps_ = 0;
};

/// Draw M walkers from a gridded density: a node is picked from the cumulative
/// mass and the walker is spread uniformly over that node's cell.
WalkerEnsemble sample_from_density(const ParticleSystem& system, const GridField& rho, std::size_t walkers,
                                   std::uint64_t master_seed);

/// Every walker at the same point.
WalkerEnsemble point_ensemble(const ParticleSystem& system, const Grid& box, std::span<const double> point,
                              std::size_t walkers, std::uint64_t master_seed);

/// One step through the maximum-entropy kernel (drift interpolated from the kernel's mean field).
WalkerEnsemble sample_step(const WalkerEnsemble& ensemble, const maxent::TransitionKernel& kernel);

/// Drift b_A = m^AB d_B Phi + eta m^AB d_B log sqrt(rho) on the grid, with rho
/// floored at floor_relative * max(rho). Throws UnderResolvedError when more than
/// 1% of the nodes are isolated points below the floor.
std::vector<GridField> coupled_drift(const ParticleSystem& system, const GridField& rho, const GridField& Phi,
                                     double floor_relative = 1e-12);

/// One Euler-Maruyama step with the drift reconstructed from the current (rho, Phi).
WalkerEnsemble evolve_ensemble_coupled(const WalkerEnsemble& ensemble, const GridField& rho, const GridField& Phi,
                                       double dt);

struct DensityEstimate {
  GridField rho;
  /// Gaussian smoothing width in length units; 0 means a raw histogram.
  double bandwidth = 0.0;
  std::size_t walkers = 0;
};

/// Normalized histogram with one bin per node of `grid` (the cell centred on the
/// node). The grid must cover the ensemble's box. Requires at least 100 walkers.
DensityEstimate estimate_density(const WalkerEnsemble& ensemble, const Grid& grid, double bandwidth = 0.0);

struct MomentReport {
  std::vector<double> empirical_mean;  // mean displacement per axis
  std::vector<double> empirical_cov;   // displacement variance about the local drift per axis
  std::vector<double> mean_standard_error;
  std::vector<double> cov_standard_error;
};

/// Paired displacement statistics. When `after` is exactly one step past
/// `before`, the covariance is taken about each walker's own recorded drift;
/// over several steps it is taken about the empirical mean.
MomentReport empirical_moments(const WalkerEnsemble& before, const WalkerEnsemble& after);

struct ScalingFit {
  std::vector<double> dts;
  std::vector<double> mean_abs_drift;
  std::vector<double> fluctuation_rms;
  double drift_exponent = 0.0;
  double fluctuation_exponent = 0.0;
};

/// Least-squares slope of log y against log x.
double loglog_slope(std::span<const double> x, std::span<const double> y);

/// One kernel step at each dt from the same initial ensemble; fits how the mean
/// drift and the RMS fluctuation scale with dt.
ScalingFit fit_step_scaling(const WalkerEnsemble& initial, const GridField& phi, std::span<const double> dts);

/// CSV header `step,walker_id,x0,...,x{D-1}`.
void write_trajectory_header(std::ostream& out, std::size_t dim);
void append_trajectory(std::ostream& out, const WalkerEnsemble& ensemble);

}  // namespace edlab::stochastic

#include "edlab/stochastic_impl.hpp"
