#pragma once

#include <cstddef>
#include <span>

#include "edlab/field.hpp"

namespace edlab {

/// How first derivatives are taken on the periodic grid. Fourth-order centred
/// differences are the default; the spectral mode is available for cross-checks.
enum class DerivativeScheme { fourth_order, spectral };

/// Wrap a difference into (-period/2, period/2]; identity when period == 0.
double wrap_difference(double d, double period);

/// d/dx_axis with periodic wrap. Angular fields are differentiated through their
/// wrapped node differences, so a winding ramp has a smooth derivative.
/// The result is an ordinary field. Throws std::out_of_range for a bad axis.
GridField gradient(const GridField& field, std::size_t axis,
                   DerivativeScheme scheme = DerivativeScheme::fourth_order);

/// gradient(gradient(f)). The composed stencil is what keeps the discrete
/// Hamiltonian flow exactly variational.
GridField second_derivative(const GridField& field, std::size_t axis,
                            DerivativeScheme scheme = DerivativeScheme::fourth_order);

/// Trapezoid quadrature on the periodic grid (equal to the rectangle rule).
double integrate(const GridField& field);

/// integral of a*b.
double inner_product(const GridField& a, const GridField& b);

/// Multilinear periodic interpolation at an arbitrary point of the box.
double interpolate(const GridField& field, std::span<const double> point);

/// Scale a non-negative field to unit integral.
GridField normalize_density(const GridField& rho);

/// relative * max(rho).
double density_floor(const GridField& rho, double relative);

/// Nodes below `floor` that sit inside a narrow dip: along some axis there are
/// nodes at or above `contrast * floor` on both sides within `window` steps.
/// Wide low tails do not count, nor does round-off noise at the edge of a tail;
/// isolated nodes and collapsed patches inside resolved density do.
std::size_t count_isolated_dips(const GridField& rho, double floor, std::size_t window = 3, double contrast = 1e4);

/// Throws UnderResolvedError when more than `max_fraction` of the nodes are isolated dips.
void require_resolved(const GridField& rho, double floor, const char* context, double max_fraction = 0.01);

}  // namespace edlab
