#pragma once

#include <map>
#include <optional>

#include "tlab/lambda_sets.hpp"

namespace tlab {

struct WienerReport {
    bool nonvanishing = false;
    std::optional<double> witness_zero; // location of the minimal |f^| when it fails
    double min_abs = 0.0;
};

/// Scans |f^| over grid frequencies with |zeta| > eta; nonvanishing iff the
/// minimum exceeds 1e-9 * sup |f^|.
WienerReport wiener_predicate(const SampledFunction& f, double eta);

/// g(x) = sin(pi x) * exp(-delta^2 x^2 / 92): vanishes on the integers, with
/// spectrum inside +-[pi - delta, pi + delta] at the 1e-10 level (the Gaussian
/// window reaches 1e-10 of its peak exactly delta away from the carriers).
SampledFunction vanishing_on_integers(double delta, const UniformGrid& grid);

/// Reference value of the same g, for oracles.
double vanishing_on_integers_at(double delta, double x);

struct AnnihilatorWitness {
    SpectralFunction g_spec;             // g^, compactly supported
    SpectralFunction k_spec;             // K = g^ / f^ on supp(g^), 0 elsewhere
    SampledFunction k;                   // k = K-inverse, bounded
    double k_sup = 0.0;
    bool trivial = false;                // g == 0
    std::map<double, cplx> residuals;    // lambda -> <k, tau_lambda f>
};

/// K by pointwise division on the numerical support |g^| > 1e-10 * max, k by
/// inverse transform, residuals via the spectral formula for the requested
/// lambdas.
AnnihilatorWitness build_annihilator(const SampledFunction& f, const SampledFunction& g,
                                     const std::vector<double>& lambdas = {});

struct ResidualRow {
    double lambda = 0.0;
    cplx residual{0.0, 0.0};
    double abs_residual = 0.0;
    double normalized = 0.0; // abs / (||k||_inf ||f||_1)
    bool excluded = false;   // |lambda| beyond the reliable window
};

struct ResidualTable {
    std::vector<ResidualRow> rows;
    double norm_scale = 0.0; // ||k||_inf ||f||_1
    std::string note;
};

/// <k, tau_lambda f> = int k^(zeta) f^(zeta) e^{i lambda zeta} d zeta for every
/// lambda in the set; |lambda| > extent/2 rows are excluded and noted.
ResidualTable annihilation_scan(const SampledFunction& k, const SampledFunction& f,
                                const DiscreteSet& lambda);

/// Spatial-side cross-check: 2 pi int k(x) f(-lambda - x) dx by resampling f
/// at shifted nodes (linear interpolation, 0 outside the grid).
cplx annihilation_spatial(const SampledFunction& k, const SampledFunction& f, double lambda);

} // namespace tlab
