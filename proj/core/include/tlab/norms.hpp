#pragma once

#include <limits>
#include <string>
#include <vector>

#include "tlab/grid.hpp"
#include "tlab/transforms.hpp"

namespace tlab {

struct IntervalSpec {
    double lo = 0.0;
    double hi = 0.0;
    double length() const { return hi - lo; }
};

IntervalSpec make_interval(double lo, double hi);

struct NormReport {
    double value = 0.0;
    std::string discretization_note;
    bool low_confidence = false;
};

/// L^p quadrature norm; p = infinity (use lp_infinity) gives max |values|.
inline constexpr double lp_infinity = std::numeric_limits<double>::infinity();
double lp_norm(const SampledFunction& f, double p);
double lp_norm(const SpectralFunction& F, double p);

/// ||f||_1 + ||Hf||_1 with the c/|x| Hilbert tail outside the grid estimated
/// from the outer 10% of nodes and recorded in the note.
NormReport h1_norm(const SampledFunction& f);

enum class WindowPolicy { all_windows, dyadic, automatic };

/// sup over grid-aligned windows of mean oscillation (1/|I|) int_I |h - h_I|.
/// all_windows scans every contiguous window of >= 2 nodes (O(n^2) windows);
/// dyadic scans power-of-two lengths at all offsets. automatic picks
/// all_windows for n <= 512. The note carries the BMO growth diagnostic
/// int |h| / (1+|x|)^2.
NormReport bmo_seminorm(const SampledFunction& h, WindowPolicy policy = WindowPolicy::automatic);

/// ||F||_{L^2(I)} + ||F'||_{L^2(I)} with F' by centered differences.
double sobolev_norm(const SpectralFunction& F, const IntervalSpec& I);
double sobolev_norm_full(const SpectralFunction& F);

/// ||K||_inf + ||K'||_inf.
double star_norm(const SpectralFunction& K);

/// h_r(x) = h(x) / max{1, |h(x)|/r}; guarantees ||h_r||_inf <= r.
SampledFunction bmo_truncate(const SampledFunction& h, double r);

struct PairingResult {
    double value = 0.0;          // final pairing value (real part; imaginary recorded)
    cplx final_pairing{0.0, 0.0};
    std::vector<cplx> sequence;  // one entry per r in the schedule
};

/// Truncated dual pairing <f, h> = lim_r int f h_r along the given increasing
/// schedule of truncation levels.
PairingResult bmo_pair(const SampledFunction& f, const SampledFunction& h,
                       const std::vector<double>& r_schedule);

} // namespace tlab
