#include "tlab/molecules.hpp"

#include <cmath>
#include <string>

namespace tlab {

MoleculeParams molecule_params(double q, double a0, double center) {
    if (!(q > 1.0)) throw DomainError("molecule_params: q must be > 1 (or infinity)");
    if (!(a0 > 0.0)) throw DomainError("molecule_params: a0 must be positive");
    MoleculeParams p;
    p.q = q;
    p.a0 = a0;
    p.b0 = (q == lp_infinity) ? 1.0 + a0 : 1.0 - 1.0 / q + a0;
    p.center = center;
    return p;
}

MoleculeReport assess_molecule(const SampledFunction& m, const MoleculeParams& p, double tol) {
    validate(m);
    MoleculeReport r;
    r.lq_norm = lp_norm(m, p.q);

    SampledFunction weighted = m;
    for (std::size_t j = 0; j < m.values.size(); ++j) {
        const double w = std::pow(std::abs(m.grid.node(j) - p.center), p.b0);
        weighted.values[j] *= w;
    }
    r.weighted_norm = lp_norm(weighted, p.q);

    const double e = p.exponent();
    r.molecular_norm = std::pow(r.lq_norm, e) * std::pow(r.weighted_norm, 1.0 - e);
    r.cancellation = integrate(m);

    if (tol < 0.0) tol = 1e-8 * lp_norm(m, 1.0);
    r.is_molecule = std::isfinite(r.lq_norm) && std::isfinite(r.weighted_norm) &&
                    std::isfinite(r.molecular_norm) && std::abs(r.cancellation) <= tol;
    return r;
}

EmbeddingReport embedding_check(const SpectralFunction& F) {
    validate(F);
    const cplx f0 = F.values[F.grid.center_index()];
    double sup = 0.0;
    for (const cplx& v : F.values) sup = std::max(sup, std::abs(v));
    if (std::abs(f0) > 1e-9 * std::max(1.0, sup))
        throw DomainError("embedding_check: F(0) = " + std::to_string(std::abs(f0)) +
                          " violates the W0 membership F(0) = 0");
    EmbeddingReport r;
    r.x_norm = h1_norm(fourier_inverse(F)).value;
    r.w_norm = sobolev_norm_full(F);
    r.ratio = (r.w_norm == 0.0) ? 0.0 : r.x_norm / r.w_norm;
    return r;
}

} // namespace tlab
