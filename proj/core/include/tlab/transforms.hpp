#pragma once

#include "tlab/grid.hpp"

namespace tlab {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Frozen transform conventions (see docs/CONVENTIONS.md):
//   forward:  F(zeta) = \int f(x) e^{+i x zeta} dx         (plus sign, no 2pi)
//   inverse:  f(x)    = (1/2pi) \int F(zeta) e^{-i x zeta} dzeta
//   Hilbert:  (Hf)^(zeta) = -i sign(zeta) F(zeta), zero bin -> 0
// Under this convention the spectral translate pairing carries a factor 2pi
// where a unitary transform would carry sqrt(2pi).
inline constexpr double kPairingConstant = kTwoPi;

/// Discrete approximation of the forward transform on the dual grid, via FFT
/// with phase correction for the -L grid offset.
SpectralFunction fourier_forward(const SampledFunction& f);

/// Inverse of fourier_forward to round-trip tolerance.
SampledFunction fourier_inverse(const SpectralFunction& F);

struct HilbertResult {
    SampledFunction f;
    // set when the zero-frequency bin carries more than 1e-6 * sup |fhat|;
    // the input is then not a numerical H^1 candidate.
    bool zero_bin_warning = false;
};

/// Fourier multiplier -i sign(zeta); the zero bin maps to 0.
HilbertResult hilbert_transform(const SampledFunction& f);

/// Centered finite difference, one-sided at the edges. Preferred over the
/// multiplier route because the tent combinations of the generator module
/// are piecewise linear with kinks.
SpectralFunction spectral_derivative(const SpectralFunction& F);
SampledFunction spatial_derivative(const SampledFunction& f);

/// Restriction of the entire extension to the line Im z = y:
///   x -> (1/2pi) \int F(zeta) e^{y zeta} e^{-i x zeta} dzeta.
/// Throws NumericalHazard naming the offending zeta when F(zeta) e^{y zeta}
/// overflows.
SampledFunction complex_shift(const SpectralFunction& F, double y);

} // namespace tlab
