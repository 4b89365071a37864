#include "tlab/grid.hpp"

#include <cmath>
#include <string>

namespace tlab {

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void check_values(const UniformGrid& g, const std::vector<cplx>& v, const char* kind) {
    if (v.size() != g.points)
        throw DomainError(std::string(kind) + ": values length " + std::to_string(v.size()) +
                          " does not match grid points " + std::to_string(g.points));
    for (std::size_t j = 0; j < v.size(); ++j)
        if (!std::isfinite(v[j].real()) || !std::isfinite(v[j].imag()))
            throw DomainError(std::string(kind) + ": non-finite value at index " + std::to_string(j));
}

} // namespace

UniformGrid make_grid(double half_extent, std::size_t points) {
    if (!(half_extent > 0.0))
        throw ConfigError("make_grid: half_extent must be positive, got " + std::to_string(half_extent));
    if (points < 8 || !is_power_of_two(points))
        throw ConfigError("make_grid: points must be a power of two >= 8, got " + std::to_string(points));
    UniformGrid g;
    g.half_extent = half_extent;
    g.points = points;
    g.spacing = 2.0 * half_extent / static_cast<double>(points);
    return g;
}

UniformGrid dual_grid(const UniformGrid& spatial) {
    const double pi = 3.14159265358979323846;
    return make_grid(pi / spatial.spacing, spatial.points);
}

SampledFunction make_sampled(const UniformGrid& g) { return {g, std::vector<cplx>(g.points, cplx{0.0, 0.0})}; }
SpectralFunction make_spectral(const UniformGrid& g) { return {g, std::vector<cplx>(g.points, cplx{0.0, 0.0})}; }

void validate(const SampledFunction& f) { check_values(f.grid, f.values, "SampledFunction"); }
void validate(const SpectralFunction& f) { check_values(f.grid, f.values, "SpectralFunction"); }

namespace {
cplx integrate_impl(const UniformGrid& g, const std::vector<cplx>& v) {
    cplx s{0.0, 0.0};
    for (const cplx& x : v) s += x;
    return g.spacing * s;
}
} // namespace

cplx integrate(const SampledFunction& f) {
    validate(f);
    return integrate_impl(f.grid, f.values);
}

cplx integrate(const SpectralFunction& f) {
    validate(f);
    return integrate_impl(f.grid, f.values);
}

double integrate_abs2_window(const std::vector<cplx>& values, const UniformGrid& g,
                             double lo, double hi) {
    if (!(lo < hi)) throw DomainError("integrate_abs2_window: lo must be < hi");
    // first and last node index inside [lo, hi]
    const double L = g.half_extent, h = g.spacing;
    long j0 = static_cast<long>(std::ceil((lo + L) / h - 1e-12));
    long j1 = static_cast<long>(std::floor((hi + L) / h + 1e-12));
    if (j0 < 0) j0 = 0;
    if (j1 >= static_cast<long>(g.points)) j1 = static_cast<long>(g.points) - 1;
    if (j1 <= j0) return 0.0;
    double s = 0.0;
    for (long j = j0; j <= j1; ++j) s += std::norm(values[static_cast<std::size_t>(j)]);
    s -= 0.5 * (std::norm(values[static_cast<std::size_t>(j0)]) +
                std::norm(values[static_cast<std::size_t>(j1)]));
    return h * s;
}

SampledFunction resample(const SampledFunction& f, const UniformGrid& target) {
    validate(f);
    if (target.half_extent > f.grid.half_extent * (1.0 + 1e-12))
        throw DomainError("resample: target grid wider than source");
    if (target == f.grid) return f;
    SampledFunction out = make_sampled(target);
    const double L = f.grid.half_extent, h = f.grid.spacing;
    const long n = static_cast<long>(f.grid.points);
    for (std::size_t j = 0; j < target.points; ++j) {
        const double x = target.node(j);
        const double u = (x + L) / h;
        const long k = static_cast<long>(std::floor(u));
        const double t = u - static_cast<double>(k);
        cplx a{0.0, 0.0}, b{0.0, 0.0};
        if (k >= 0 && k < n) a = f.values[static_cast<std::size_t>(k)];
        if (k + 1 >= 0 && k + 1 < n) b = f.values[static_cast<std::size_t>(k + 1)];
        out.values[j] = (1.0 - t) * a + t * b;
    }
    return out;
}

} // namespace tlab
