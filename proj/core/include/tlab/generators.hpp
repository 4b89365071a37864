#pragma once

#include <functional>
#include <map>
#include <optional>

#include "tlab/lambda_sets.hpp"
#include "tlab/molecules.hpp"

namespace tlab {

/// Tent map: 1 - |zeta| on [-1, 1], 0 elsewhere.
double tent_phi(double zeta);
SpectralFunction sample_tent(const UniformGrid& freq_grid);

/// Coefficients of the inductive construction: symmetric deltas delta_i and
/// the epsilon schedule they are derived from. delta_tilde(n) = eps_n - eps_{n+1}.
struct TentCoefficients {
    std::map<int, double> deltas;       // delta_0 = 0, delta_{-i} = delta_i
    std::vector<double> epsilons;       // eps_1, eps_2, ... (strictly decreasing, <= 1/2)

    double delta(int i) const;
    double epsilon(int n) const;        // 1-based
    double delta_tilde(int n) const { return epsilon(n) - epsilon(n + 1); }
    void set_delta(int i, double v);
    void check() const;                 // invariants: delta_0 = 0, symmetry, schedule shape
};

/// Default schedule eps_n = 2^{-n-1} for n = 1..count (needs count+1 entries
/// for the final delta_tilde).
TentCoefficients default_schedule(int count);

/// F_n(zeta) = sum_{|i| <= n} delta_i Phi(zeta - i), evaluable anywhere.
double evaluate_partial_sum(const TentCoefficients& c, int n, double zeta);
SpectralFunction partial_sum_F(const TentCoefficients& c, int n, const UniformGrid& freq_grid);

/// A family member is a real trig packet with lines inside one block of the
/// multiscale frequency set, times the tent envelope F_n predicted by the
/// schedule; closed form, so it can be resampled on any grid.
struct FamilyMember {
    int index = 1; // member 1 is identically zero
    struct Bump {  // one cos line of the packet
        double coefficient = 0.0; // rational-grid coefficient times the member scale
        double carrier = 0.0;     // line frequency, inside a Lambda block
        double phase = 0.0;
    };
    std::vector<Bump> bumps;
    double scale = 0.0;

    double evaluate(double zeta) const;
    SpectralFunction sample(const UniformGrid& freq_grid) const;
};

struct DenseFamily {
    std::vector<FamilyMember> members;
    std::uint64_t seed = 0;
    IntervalSpec support(int n) const { return {-double(n) - 1.0, double(n) + 1.0}; }
};

/// Desk-scale stand-in for a dense countable subset of W0: member n rides the
/// predicted envelope F_n (so it shares its support and zeros) and its packet
/// amplitude is capped so every fitted p_n keeps star norm below 1, which in
/// turn keeps the envelope prediction valid.
DenseFamily build_dense_family(int count, std::uint64_t seed);

struct FitResult {
    std::vector<double> frequencies;
    std::vector<cplx> coefficients;
    double residual_w = 0.0;  // achieved || target - q ||_{W(I)}
    double ridge_used = 0.0;
    bool converged = false;   // residual under the requested bound
};

struct FitOptions {
    std::size_t max_terms = 240;
    double residual_bound = 0.0;  // <= 0: best effort, no convergence verdict
    std::vector<double> ridge_scales{1e-5, 1e-7, 1e-9, 1e-11, 0.0};
};

/// Least squares over span{e^{i lambda t}} minimizing the W(I) inner-product
/// objective <u,v>_W = <u,v>_{L2(I)} + <u',v'>_{L2(I)}. Returns the best
/// attempt even when the bound is missed.
FitResult fit_polynomial(const SpectralFunction& target, const DiscreteSet& lambda,
                         const IntervalSpec& I, const FitOptions& opts = {});

/// Evaluate a fitted polynomial q(t) = sum c_lambda e^{i lambda t} and its
/// exact derivative on a grid.
SpectralFunction evaluate_polynomial(const FitResult& fit, const UniformGrid& freq_grid);
cplx evaluate_polynomial_at(const FitResult& fit, double t);

struct StageRecord {
    int n = 0;
    double delta_n = 0.0;
    double fit_residual = 0.0;     // || G_n/F_n - p_n ||_{W([-(n+1), n+1])}
    double stage_error = 0.0;      // || G_n - p_n F ||_{W(R)} with the final F
    double p_star_norm = 0.0;      // || p_n ||_* on the represented window
    double min_on_support = 0.0;   // min F_n over I_n (must clear the lower bound)
    bool fit_converged = false;
    FitResult fit;
};

struct GeneratorRecipe {
    TentCoefficients coefficients;
    std::vector<StageRecord> stages;
    std::uint64_t family_seed = 0;
    int family_count = 0;
    double grid_half_extent = 0.0;
    std::size_t grid_points = 0;
    double frequency_cut_factor = 4.0; // offer |lambda| <= factor * (n+1) per stage
    bool density_warning = false;      // Lambda not infinite-flagged

    SpectralFunction sample_F(const UniformGrid& freq_grid) const;
};

struct GeneratorOptions {
    double frequency_cut_factor = 4.0;
    FitOptions fit;
};

/// The inductive construction: delta_1 = eps_1 - eps_2, stage n divides
/// delta_tilde(n) by 4 max{1, ||p_1||_*, ..., ||p_{n-1}||_*}, verifies the
/// positivity floor of F_n on I_n, fits p_n to G_n / F_n and records the
/// achieved stage error against the final F.
GeneratorRecipe construct_generator(const DiscreteSet& lambda, const DenseFamily& family,
                                    int stages, const UniformGrid& freq_grid,
                                    const GeneratorOptions& opts = {});

struct CompletenessReport {
    bool ok = false;
    double achieved_error_h1 = 0.0;
    int stage_used = 0;
    double member_distance = 0.0; // || target - (G_N)^vee ||_{H1}
    std::string failure;          // set when no member covers the target
};

/// The closing chain: find a member within eps/2 of the target in H1 whose
/// index satisfies d0 eps_N < eps/2, then report the achieved error of
/// sum c^N_lambda tau_lambda f against the target.
CompletenessReport completeness_experiment(const GeneratorRecipe& recipe, const DenseFamily& family,
                                           const SampledFunction& target, double eps, double d0);

/// The two-generator construction: a smooth bump on the gap interval J,
/// exponentially damped 2pi-translates, and a zero repair in the cell
/// containing the origin.
struct PairRecipe {
    IntervalSpec interval_i;
    IntervalSpec interval_j;
    double bump_peak = 1.0;
    int range_n = 6;
    std::optional<int> zero_fix_index; // n0 with 0 in J + 2 pi n0, when applicable

    double evaluate(double t) const;   // F(t)
    SpectralFunction sample(const UniformGrid& freq_grid) const;
};

struct PairResult {
    PairRecipe recipe_1, recipe_2;
    SpectralFunction f1_spec, f2_spec;
};

/// Builds both generators of the pair; requires 0 < |I1|, |I2| < 2 pi and
/// [-pi, pi] inside I1 u I2.
PairResult pair_generators(const IntervalSpec& I1, const IntervalSpec& I2,
                           const UniformGrid& freq_grid, int range_n);

PairRecipe build_pair_recipe(const IntervalSpec& I, int range_n);

} // namespace tlab
