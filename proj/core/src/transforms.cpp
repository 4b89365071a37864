#include "tlab/transforms.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <mutex>
#include <string>
#include <vector>

namespace tlab {

namespace {

// FFTW's planner is not thread safe; execution on private buffers is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

// In-place unnormalized DFT of v; sign = FFTW_FORWARD (-i kernel) or
// FFTW_BACKWARD (+i kernel).
void fft(std::vector<cplx>& v, int sign) {
    const int n = static_cast<int>(v.size());
    fftw_complex* buf = reinterpret_cast<fftw_complex*>(v.data());
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        plan = fftw_plan_dft_1d(n, buf, buf, sign, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
}

} // namespace

// With x_j = -L + j h, zeta_k = -Omega + k dz, h dz = 2pi/n, h Omega = pi and
// L dz = pi, the phase e^{i x_j zeta_k} collapses to (-1)^{j+k} e^{2pi i jk/n}
// (n is a multiple of 4, so the constant e^{i n pi / 2} is 1).
SpectralFunction fourier_forward(const SampledFunction& f) {
    validate(f);
    const std::size_t n = f.grid.points;
    SpectralFunction out = make_spectral(dual_grid(f.grid));
    std::vector<cplx> buf(n);
    for (std::size_t j = 0; j < n; ++j)
        buf[j] = (j & 1) ? -f.values[j] : f.values[j];
    fft(buf, FFTW_BACKWARD); // +i kernel
    const double h = f.grid.spacing;
    for (std::size_t k = 0; k < n; ++k)
        out.values[k] = ((k & 1) ? -h : h) * buf[k];
    return out;
}

SampledFunction fourier_inverse(const SpectralFunction& F) {
    validate(F);
    const std::size_t n = F.grid.points;
    // spatial grid dual to the frequency grid (the dual map is an involution)
    SampledFunction out = make_sampled(dual_grid(F.grid));
    std::vector<cplx> buf(n);
    for (std::size_t k = 0; k < n; ++k)
        buf[k] = (k & 1) ? -F.values[k] : F.values[k];
    fft(buf, FFTW_FORWARD); // -i kernel
    const double scale = F.grid.spacing / kTwoPi;
    for (std::size_t j = 0; j < n; ++j)
        out.values[j] = ((j & 1) ? -scale : scale) * buf[j];
    return out;
}

HilbertResult hilbert_transform(const SampledFunction& f) {
    SpectralFunction F = fourier_forward(f);
    double sup = 0.0;
    for (const cplx& v : F.values) sup = std::max(sup, std::abs(v));
    const std::size_t zero_bin = F.grid.center_index();
    const bool warn = sup > 0.0 && std::abs(F.values[zero_bin]) > 1e-6 * sup;
    const cplx minus_i{0.0, -1.0};
    for (std::size_t k = 0; k < F.values.size(); ++k) {
        const double zeta = F.grid.node(k);
        if (k == zero_bin)
            F.values[k] = cplx{0.0, 0.0};
        else
            F.values[k] *= (zeta > 0.0) ? minus_i : -minus_i;
    }
    return {fourier_inverse(F), warn};
}

namespace {
std::vector<cplx> centered_diff(const std::vector<cplx>& v, double h) {
    const std::size_t n = v.size();
    std::vector<cplx> d(n);
    if (n < 2) return d;
    d[0] = (v[1] - v[0]) / h;
    d[n - 1] = (v[n - 1] - v[n - 2]) / h;
    for (std::size_t j = 1; j + 1 < n; ++j) d[j] = (v[j + 1] - v[j - 1]) / (2.0 * h);
    return d;
}
} // namespace

SpectralFunction spectral_derivative(const SpectralFunction& F) {
    validate(F);
    SpectralFunction out = F;
    out.values = centered_diff(F.values, F.grid.spacing);
    return out;
}

SampledFunction spatial_derivative(const SampledFunction& f) {
    validate(f);
    SampledFunction out = f;
    out.values = centered_diff(f.values, f.grid.spacing);
    return out;
}

SampledFunction complex_shift(const SpectralFunction& F, double y) {
    validate(F);
    SpectralFunction shifted = F;
    for (std::size_t k = 0; k < F.values.size(); ++k) {
        const double zeta = F.grid.node(k);
        const double factor = std::exp(y * zeta);
        const cplx v = F.values[k] * factor;
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw NumericalHazard("complex_shift: F(zeta) e^{y zeta} overflows at zeta = " +
                                  std::to_string(zeta));
        shifted.values[k] = v;
    }
    return fourier_inverse(shifted);
}

} // namespace tlab
