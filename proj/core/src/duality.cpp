#include "tlab/duality.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace tlab {

WienerReport wiener_predicate(const SampledFunction& f, double eta) {
    validate(f);
    if (!(eta > 0.0)) throw ConfigError("wiener_predicate: eta must be positive");
    SpectralFunction F = fourier_forward(f);
    double sup = 0.0;
    for (const cplx& v : F.values) sup = std::max(sup, std::abs(v));

    WienerReport r;
    r.min_abs = std::numeric_limits<double>::infinity();
    double argmin = 0.0;
    bool scanned = false;
    for (std::size_t k = 0; k < F.grid.points; ++k) {
        const double z = F.grid.node(k);
        if (std::abs(z) <= eta) continue;
        const double a = std::abs(F.values[k]);
        if (!scanned || a < r.min_abs) {
            r.min_abs = a;
            argmin = z;
            scanned = true;
        }
    }
    if (!scanned) throw ConfigError("wiener_predicate: eta excludes the whole grid");
    r.nonvanishing = r.min_abs > 1e-9 * sup;
    if (!r.nonvanishing) r.witness_zero = argmin;
    return r;
}

double vanishing_on_integers_at(double delta, double x) {
    const double u = delta * x;
    return std::sin(kPi * x) * std::exp(-u * u / 92.0);
}

SampledFunction vanishing_on_integers(double delta, const UniformGrid& grid) {
    if (!(delta > 0.0 && delta < kPi))
        throw DomainError("vanishing_on_integers: need 0 < delta < pi");
    SampledFunction g = make_sampled(grid);
    for (std::size_t j = 0; j < grid.points; ++j)
        g.values[j] = vanishing_on_integers_at(delta, grid.node(j));
    return g;
}

namespace {

cplx spectral_residual(const SpectralFunction& P, double lambda) {
    // Delta zeta * sum P(zeta) e^{i lambda zeta}
    cplx s{0.0, 0.0};
    for (std::size_t k = 0; k < P.grid.points; ++k)
        s += P.values[k] * std::exp(cplx{0.0, lambda * P.grid.node(k)});
    return s * P.grid.spacing;
}

} // namespace

AnnihilatorWitness build_annihilator(const SampledFunction& f, const SampledFunction& g,
                                     const std::vector<double>& lambdas) {
    validate(f);
    validate(g);
    if (!(f.grid == g.grid)) throw DomainError("build_annihilator: f and g grids differ");

    SpectralFunction F = fourier_forward(f);
    AnnihilatorWitness w;
    w.g_spec = fourier_forward(g);
    w.k_spec = make_spectral(F.grid);

    double gmax = 0.0, fmax = 0.0;
    for (const cplx& v : w.g_spec.values) gmax = std::max(gmax, std::abs(v));
    for (const cplx& v : F.values) fmax = std::max(fmax, std::abs(v));

    if (gmax == 0.0) {
        w.trivial = true;
        w.k = make_sampled(f.grid);
        for (double l : lambdas) w.residuals[l] = cplx{0.0, 0.0};
        return w;
    }

    const double support_cut = 1e-10 * gmax;
    const double hazard_cut = 1e-8 * fmax;
    for (std::size_t k = 0; k < F.grid.points; ++k) {
        if (std::abs(w.g_spec.values[k]) <= support_cut) continue;
        if (std::abs(F.values[k]) < hazard_cut) {
            std::ostringstream msg;
            msg << "build_annihilator: |f^| = " << std::abs(F.values[k])
                << " at zeta = " << F.grid.node(k) << " inside supp(g^)";
            throw NumericalHazard(msg.str());
        }
        w.k_spec.values[k] = w.g_spec.values[k] / F.values[k];
    }

    w.k = fourier_inverse(w.k_spec);
    for (const cplx& v : w.k.values) w.k_sup = std::max(w.k_sup, std::abs(v));

    SpectralFunction P = w.k_spec;
    for (std::size_t k = 0; k < P.grid.points; ++k) P.values[k] *= F.values[k];
    for (double l : lambdas) w.residuals[l] = spectral_residual(P, l);
    return w;
}

ResidualTable annihilation_scan(const SampledFunction& k, const SampledFunction& f,
                                const DiscreteSet& lambda) {
    validate(k);
    validate(f);
    if (!(k.grid == f.grid)) throw DomainError("annihilation_scan: k and f grids differ");

    SpectralFunction K = fourier_forward(k);
    SpectralFunction F = fourier_forward(f);
    SpectralFunction P = K;
    for (std::size_t j = 0; j < P.grid.points; ++j) P.values[j] *= F.values[j];

    double ksup = 0.0;
    for (const cplx& v : k.values) ksup = std::max(ksup, std::abs(v));
    const double f1 = lp_norm(f, 1.0);

    ResidualTable table;
    table.norm_scale = ksup * f1;
    const double window = k.grid.half_extent / 2.0;
    std::size_t excluded = 0;
    for (double l : lambda.points) {
        ResidualRow row;
        row.lambda = l;
        if (std::abs(l) > window) {
            row.excluded = true;
            ++excluded;
        } else {
            row.residual = spectral_residual(P, l);
            row.abs_residual = std::abs(row.residual);
            row.normalized = table.norm_scale > 0.0 ? row.abs_residual / table.norm_scale : 0.0;
        }
        table.rows.push_back(row);
    }
    if (excluded > 0) {
        std::ostringstream note;
        note << excluded << " lambda(s) beyond the reliable window |lambda| <= " << window
             << " excluded";
        table.note = note.str();
    }
    return table;
}

cplx annihilation_spatial(const SampledFunction& k, const SampledFunction& f, double lambda) {
    validate(k);
    validate(f);
    if (!(k.grid == f.grid)) throw DomainError("annihilation_spatial: grids differ");
    const UniformGrid& g = k.grid;
    auto interp = [&](double x) -> cplx {
        const double pos = (x + g.half_extent) / g.spacing;
        if (pos < 0.0 || pos > static_cast<double>(g.points - 1)) return {0.0, 0.0};
        const std::size_t j = std::min(static_cast<std::size_t>(pos), g.points - 2);
        const double t = pos - static_cast<double>(j);
        return (1.0 - t) * f.values[j] + t * f.values[j + 1];
    };
    // 2 pi int k(x) f(-lambda - x) dx matches the spectral formula under the
    // artifact's non-unitary convention
    cplx s{0.0, 0.0};
    for (std::size_t j = 0; j < g.points; ++j)
        s += k.values[j] * interp(-lambda - g.node(j));
    return kPairingConstant * s * g.spacing;
}

} // namespace tlab
