#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "tlab/errors.hpp"

namespace tlab {

using cplx = std::complex<double>;

/// Uniform grid on [-L, L), dyadic size, node x_j = -L + j*spacing.
/// spacing = 2L/points is derived, never stored independently of L and n.
struct UniformGrid {
    double half_extent = 0.0;
    std::size_t points = 0;
    double spacing = 0.0;

    double node(std::size_t j) const { return -half_extent + static_cast<double>(j) * spacing; }
    std::size_t center_index() const { return points / 2; } // node exactly at 0

    bool operator==(const UniformGrid& o) const {
        return half_extent == o.half_extent && points == o.points;
    }
};

UniformGrid make_grid(double half_extent, std::size_t points);

/// Frequency grid dual to a spatial grid: same point count, spacing pi/L,
/// so the dual half extent is pi/spacing (Nyquist).
UniformGrid dual_grid(const UniformGrid& spatial);

/// Complex samples on a spatial grid.
struct SampledFunction {
    UniformGrid grid;
    std::vector<cplx> values;
};

/// Complex samples on a frequency grid (frequency variable: zeta).
struct SpectralFunction {
    UniformGrid grid;
    std::vector<cplx> values;
};

SampledFunction make_sampled(const UniformGrid& g);
SpectralFunction make_spectral(const UniformGrid& g);

/// Throws DomainError when the shape/finiteness invariants fail.
void validate(const SampledFunction& f);
void validate(const SpectralFunction& f);

/// Periodic trapezoid rule: spacing * sum of values. The two half-weight
/// endpoints of [-L, L] coincide under the periodic closure, so the lone
/// boundary node carries full weight. Exact for grid-supported piecewise
/// linear integrands.
cplx integrate(const SampledFunction& f);
cplx integrate(const SpectralFunction& f);

/// Quadrature restricted to [lo, hi]: trapezoid over the grid nodes inside
/// the window, with half weights at the two boundary nodes of the window.
double integrate_abs2_window(const std::vector<cplx>& values, const UniformGrid& g,
                             double lo, double hi);

/// Linear interpolation onto the target grid; 0 outside the source support.
/// target extent must not exceed source extent.
SampledFunction resample(const SampledFunction& f, const UniformGrid& target);

} // namespace tlab
