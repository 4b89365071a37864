#pragma once

#include "tlab/norms.hpp"

namespace tlab {

/// Parameters of a (q, a0)-molecule centered at x0, with derived decay
/// exponent b0 = 1 - 1/q + a0.
struct MoleculeParams {
    double q = 2.0;       // in (1, inf]; lp_infinity for the max-norm case
    double a0 = 0.5;
    double b0 = 1.0;      // derived
    double center = 0.0;  // x0
    double exponent() const { return a0 / b0; }
};

MoleculeParams molecule_params(double q, double a0, double center = 0.0);

struct MoleculeReport {
    double lq_norm = 0.0;
    double weighted_norm = 0.0;  // || m(.) |.-x0|^{b0} ||_q
    double molecular_norm = 0.0; // N_q(m)
    cplx cancellation{0.0, 0.0}; // int m
    bool is_molecule = false;
};

/// Checks the three defining conditions; failures are reported in the record,
/// not thrown. Cancellation tolerance defaults to 1e-8 * ||m||_1.
MoleculeReport assess_molecule(const SampledFunction& m, const MoleculeParams& p,
                               double tol = -1.0);

struct EmbeddingReport {
    double x_norm = 0.0; // H1 norm of the inverse transform
    double w_norm = 0.0; // Sobolev W norm of F over the full grid
    double ratio = 0.0;  // x_norm / w_norm, 0 by convention when both vanish
};

/// Desk-scale probe of the W0 -> H1 embedding; requires F(0) = 0 within 1e-9.
EmbeddingReport embedding_check(const SpectralFunction& F);

} // namespace tlab
