#include "tlab/generators.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace tlab {

double tent_phi(double zeta) {
    const double a = std::abs(zeta);
    return a >= 1.0 ? 0.0 : 1.0 - a;
}

SpectralFunction sample_tent(const UniformGrid& freq_grid) {
    SpectralFunction F = make_spectral(freq_grid);
    for (std::size_t k = 0; k < freq_grid.points; ++k)
        F.values[k] = tent_phi(freq_grid.node(k));
    return F;
}

double TentCoefficients::delta(int i) const {
    auto it = deltas.find(std::abs(i));
    if (it == deltas.end())
        throw ConfigError("TentCoefficients: delta_" + std::to_string(i) + " not defined");
    return it->second;
}

double TentCoefficients::epsilon(int n) const {
    if (n < 1 || static_cast<std::size_t>(n) > epsilons.size())
        throw ConfigError("TentCoefficients: eps_" + std::to_string(n) + " not defined");
    return epsilons[static_cast<std::size_t>(n) - 1];
}

void TentCoefficients::set_delta(int i, double v) {
    if (v < 0.0) throw DomainError("TentCoefficients: deltas are nonnegative");
    deltas[std::abs(i)] = v;
}

void TentCoefficients::check() const {
    if (deltas.count(0) && deltas.at(0) != 0.0)
        throw DomainError("TentCoefficients: delta_0 must be 0");
    double prev = 0.5 + 1e-15;
    for (double e : epsilons) {
        if (!(e > 0.0 && e < prev))
            throw DomainError("TentCoefficients: epsilon schedule must be strictly decreasing, positive, <= 1/2");
        prev = e;
    }
    if (epsilons.size() >= 2 && deltas.count(1)) {
        const double d1 = epsilons[0] - epsilons[1];
        if (std::abs(deltas.at(1) - d1) > 1e-14)
            throw DomainError("TentCoefficients: delta_1 must equal eps_1 - eps_2");
    }
}

TentCoefficients default_schedule(int count) {
    TentCoefficients c;
    for (int n = 1; n <= count + 1; ++n) c.epsilons.push_back(std::ldexp(1.0, -n - 1));
    c.set_delta(0, 0.0);
    c.set_delta(1, c.epsilons[0] - c.epsilons[1]);
    return c;
}

double evaluate_partial_sum(const TentCoefficients& c, int n, double zeta) {
    // tents overlap at most two at a time
    double s = 0.0;
    const int i0 = static_cast<int>(std::floor(zeta));
    for (int i = i0; i <= i0 + 1; ++i) {
        if (std::abs(i) > n) continue;
        s += c.delta(i) * tent_phi(zeta - static_cast<double>(i));
    }
    return s;
}

SpectralFunction partial_sum_F(const TentCoefficients& c, int n, const UniformGrid& freq_grid) {
    for (int i = 0; i <= n; ++i) c.delta(i); // missing coefficient -> ConfigError
    SpectralFunction F = make_spectral(freq_grid);
    for (std::size_t k = 0; k < freq_grid.points; ++k)
        F.values[k] = evaluate_partial_sum(c, n, freq_grid.node(k));
    return F;
}

double FamilyMember::evaluate(double zeta) const {
    if (index <= 1 || bumps.empty()) return 0.0;
    double s = 0.0;
    for (const Bump& b : bumps) s += b.coefficient * std::cos(b.carrier * zeta + b.phase);
    // envelope: the tent partial sum F_n as it comes out when every fitted
    // p_k keeps ||p_k||_* <= 1, i.e. delta_k = delta_tilde(k) / 4. Then the
    // stage quotient G_n / F_n collapses to the trig packet itself, which is
    // an exact E(Lambda) polynomial with small coefficients.
    TentCoefficients pred = default_schedule(index);
    for (int k = 2; k <= index; ++k) pred.set_delta(k, pred.delta_tilde(k) / 4.0);
    return scale * s * evaluate_partial_sum(pred, index, zeta);
}

SpectralFunction FamilyMember::sample(const UniformGrid& freq_grid) const {
    SpectralFunction F = make_spectral(freq_grid);
    for (std::size_t k = 0; k < freq_grid.points; ++k)
        F.values[k] = evaluate(freq_grid.node(k));
    return F;
}

DenseFamily build_dense_family(int count, std::uint64_t seed) {
    if (count < 1) throw ConfigError("build_dense_family: count must be >= 1");
    DenseFamily fam;
    fam.seed = seed;
    for (int n = 1; n <= count; ++n) {
        FamilyMember m;
        m.index = n;
        if (n >= 2) {
            std::mt19937_64 rng(seed + static_cast<std::uint64_t>(n) * 0x9e3779b97f4a7c15ULL);
            std::uniform_real_distribution<double> unit(0.0, 1.0);
            // trig packet with lines inside the [8, 12] block of the
            // multiscale set (spacing 2^-3), which sits below every stage cut
            // 4 (n + 1) for n >= 2; each cos line is a +/- frequency pair so
            // the member stays real
            const int nlines = 4 + static_cast<int>(rng() % 3);
            for (int b = 0; b < nlines; ++b) {
                FamilyMember::Bump line;
                line.carrier = 8.0 + 0.125 * static_cast<double>(rng() % 33);
                int k = static_cast<int>(rng() % 17) - 8; // rational-grid coefficient k/8
                if (k == 0) k = 3;
                line.coefficient = static_cast<double>(k) / 8.0;
                line.phase = kTwoPi * unit(rng);
                m.bumps.push_back(line);
            }
            // scale so sup |packet| <= min(4 delta_tilde(n), 0.06): the fitted
            // p_n then lands at star norm <= (1 + 12) * 0.06 < 1 and the
            // delta_k = delta_tilde(k)/4 prediction in the envelope holds up
            TentCoefficients sched = default_schedule(n);
            double l1 = 0.0;
            for (const auto& b : m.bumps) l1 += std::abs(b.coefficient);
            m.scale = std::min(4.0 * sched.delta_tilde(n), 0.06) / l1;
        }
        fam.members.push_back(std::move(m));
    }
    return fam;
}

namespace {

// int_a^b e^{i mu t} dt
struct WindowIdx {
    std::size_t j0 = 0, j1 = 0;
    bool empty = true;
};

WindowIdx window_indices(const UniformGrid& g, double lo, double hi) {
    long j0 = static_cast<long>(std::ceil((lo + g.half_extent) / g.spacing - 1e-12));
    long j1 = static_cast<long>(std::floor((hi + g.half_extent) / g.spacing + 1e-12));
    j0 = std::max<long>(j0, 0);
    j1 = std::min<long>(j1, static_cast<long>(g.points) - 1);
    if (j1 <= j0) return {};
    return {static_cast<std::size_t>(j0), static_cast<std::size_t>(j1), false};
}

} // namespace

FitResult fit_polynomial(const SpectralFunction& target, const DiscreteSet& lambda,
                         const IntervalSpec& I, const FitOptions& opts) {
    validate(target);
    if (lambda.points.empty()) throw DomainError("fit_polynomial: empty frequency set");
    const UniformGrid& g = target.grid;
    if (I.lo < -g.half_extent || I.hi > g.half_extent)
        throw DomainError("fit_polynomial: interval outside the target grid");

    // frequencies, nearest |lambda| first, capped at max_terms
    std::vector<double> freqs = lambda.points;
    std::sort(freqs.begin(), freqs.end(),
              [](double a, double b) { return std::abs(a) < std::abs(b); });
    if (freqs.size() > opts.max_terms) freqs.resize(opts.max_terms);
    const std::size_t m = freqs.size();

    const WindowIdx w = window_indices(g, I.lo, I.hi);
    if (w.empty) throw DomainError("fit_polynomial: interval contains no grid nodes");

    // Weighted design matrix over the trapezoid nodes of I: one row block for
    // values, one for derivatives, so ||y - E c||^2 is exactly the discrete
    // W(I) objective that the residual reports. Solving the least squares by
    // rank-revealing QR instead of the Gram avoids squaring the condition
    // number of this (highly redundant) exponential system.
    SpectralFunction du = spectral_derivative(target);
    const double h = g.spacing;
    const std::size_t nodes = w.j1 - w.j0 + 1;
    Eigen::MatrixXcd E(2 * nodes, m);
    Eigen::VectorXcd y(2 * nodes);
    for (std::size_t p = w.j0; p <= w.j1; ++p) {
        const double t = g.node(p);
        const double sw = std::sqrt(h * ((p == w.j0 || p == w.j1) ? 0.5 : 1.0));
        const std::size_t r = 2 * (p - w.j0);
        for (std::size_t j = 0; j < m; ++j) {
            const cplx e = std::exp(cplx{0.0, freqs[j] * t});
            E(r, j) = sw * e;
            // sin(lh)/h is the centered difference applied to e^{ilt}: the
            // target derivative is sampled that way, so the basis has to be
            E(r + 1, j) = sw * cplx{0.0, std::sin(freqs[j] * h) / h} * e;
        }
        y(r) = sw * target.values[p];
        y(r + 1) = sw * du.values[p];
    }

    double trace_scale = 0.0;
    for (std::size_t j = 0; j < m; ++j) trace_scale += (1.0 + freqs[j] * freqs[j]);
    trace_scale *= h * (static_cast<double>(nodes) - 1.0) / static_cast<double>(m);
    FitResult best;
    best.residual_w = std::numeric_limits<double>::infinity();

    auto residual_of = [&](const Eigen::VectorXcd& c) {
        // || u - q ||_{L2(I)} + || u' - q' ||_{L2(I)} with q, q' exact
        double n0 = 0.0, n1 = 0.0;
        if (!w.empty) {
            for (std::size_t p = w.j0; p <= w.j1; ++p) {
                const double t = g.node(p);
                const double weight = (p == w.j0 || p == w.j1) ? 0.5 : 1.0;
                cplx q{0.0, 0.0}, dq{0.0, 0.0};
                for (std::size_t j = 0; j < m; ++j) {
                    const cplx e = std::exp(cplx{0.0, freqs[j] * t});
                    q += c(j) * e;
                    dq += c(j) * cplx{0.0, std::sin(freqs[j] * h) / h} * e;
                }
                n0 += weight * std::norm(target.values[p] - q);
                n1 += weight * std::norm(du.values[p] - dq);
            }
        }
        return std::sqrt(g.spacing * n0) + std::sqrt(g.spacing * n1);
    };

    for (double rs : opts.ridge_scales) {
        const double ridge = rs * trace_scale;
        // ridge as sqrt(ridge) rows appended to the design keeps the problem
        // equivalent to (Gram + ridge I) c = b without forming the Gram
        Eigen::MatrixXcd Er(2 * nodes + m, m);
        Er.topRows(2 * nodes) = E;
        Er.bottomRows(m) = std::sqrt(ridge) * Eigen::MatrixXcd::Identity(m, m);
        Eigen::VectorXcd yr = Eigen::VectorXcd::Zero(2 * nodes + m);
        yr.head(2 * nodes) = y;
        Eigen::VectorXcd c = Er.colPivHouseholderQr().solve(yr);
        const double res = residual_of(c);
        if (opts.residual_bound > 0.0 && res <= 0.9 * opts.residual_bound) {
            // prefer the largest ridge (smallest coefficients) that clears the bound
            best.residual_w = res;
            best.ridge_used = ridge;
            best.coefficients.assign(c.data(), c.data() + m);
            break;
        }
        if (res < best.residual_w) {
            best.residual_w = res;
            best.ridge_used = ridge;
            best.coefficients.assign(c.data(), c.data() + m);
        }
    }
    best.frequencies = freqs;
    best.converged = opts.residual_bound <= 0.0 || best.residual_w <= opts.residual_bound;
    return best;
}

cplx evaluate_polynomial_at(const FitResult& fit, double t) {
    cplx q{0.0, 0.0};
    for (std::size_t j = 0; j < fit.frequencies.size(); ++j)
        q += fit.coefficients[j] * std::exp(cplx{0.0, fit.frequencies[j] * t});
    return q;
}

SpectralFunction evaluate_polynomial(const FitResult& fit, const UniformGrid& freq_grid) {
    SpectralFunction q = make_spectral(freq_grid);
    for (std::size_t k = 0; k < freq_grid.points; ++k)
        q.values[k] = evaluate_polynomial_at(fit, freq_grid.node(k));
    return q;
}

namespace {

// sup |p| + sup |p'| over [-W, W], dense sampling; W covers the support of
// every F_n in play, which is all the star norm has to control.
double polynomial_star_norm(const FitResult& fit, double W) {
    double sup = 0.0, dsup = 0.0;
    const double step = 0.01;
    for (double t = -W; t <= W; t += step) {
        cplx q{0.0, 0.0}, dq{0.0, 0.0};
        for (std::size_t j = 0; j < fit.frequencies.size(); ++j) {
            const cplx e = std::exp(cplx{0.0, fit.frequencies[j] * t});
            q += fit.coefficients[j] * e;
            dq += fit.coefficients[j] * cplx{0.0, fit.frequencies[j]} * e;
        }
        sup = std::max(sup, std::abs(q));
        dsup = std::max(dsup, std::abs(dq));
    }
    return sup + dsup;
}

} // namespace

SpectralFunction GeneratorRecipe::sample_F(const UniformGrid& freq_grid) const {
    return partial_sum_F(coefficients, static_cast<int>(stages.size()), freq_grid);
}

GeneratorRecipe construct_generator(const DiscreteSet& lambda, const DenseFamily& family,
                                    int stages, const UniformGrid& freq_grid,
                                    const GeneratorOptions& opts) {
    if (stages < 1 || static_cast<std::size_t>(stages) > family.members.size())
        throw ConfigError("construct_generator: stages must be in [1, family size]");

    GeneratorRecipe recipe;
    recipe.coefficients = default_schedule(stages);
    recipe.family_seed = family.seed;
    recipe.family_count = static_cast<int>(family.members.size());
    recipe.grid_half_extent = freq_grid.half_extent;
    recipe.grid_points = freq_grid.points;
    recipe.frequency_cut_factor = opts.frequency_cut_factor;

    {
        std::vector<double> d_grid;
        for (double d = 0.25; d <= 2.0 + 1e-12; d += 0.25) d_grid.push_back(d);
        DensityEstimate est = bm_density_estimate(lambda, d_grid);
        recipe.density_warning = est.classification != DensityClass::infinite_flagged;
    }

    TentCoefficients& c = recipe.coefficients;
    std::vector<double> star_norms; // ||p_k||_*

    for (int n = 1; n <= stages; ++n) {
        StageRecord stage;
        stage.n = n;
        if (n >= 2) {
            double M = 1.0;
            for (double s : star_norms) M = std::max(M, s);
            stage.delta_n = c.delta_tilde(n) / (4.0 * M);
            c.set_delta(n, stage.delta_n);
        } else {
            stage.delta_n = c.delta(1);
        }

        // positivity floor of F_n on I_n = [-n, -1/n] u [1/n, n]; F_n is
        // piecewise linear with kinks at the integers and attains its minimum
        // over I_n at 1/n or at an integer.
        double min_fn = evaluate_partial_sum(c, n, 1.0 / n);
        for (int k = 1; k <= n; ++k)
            min_fn = std::min(min_fn, evaluate_partial_sum(c, n, static_cast<double>(k)));
        stage.min_on_support = min_fn;
        const double floor = std::min(stage.delta_n, c.delta(1) / n);
        if (min_fn < floor * (1.0 - 1e-9))
            throw NumericalHazard("construct_generator: F_n dropped below its positivity floor at stage " +
                                  std::to_string(n));

        // quotient G_n / F_n where F_n lives, extended by 0 past the support
        // edges (G_n vanishes there too, so no jump enters the fit window)
        const FamilyMember& member = family.members[static_cast<std::size_t>(n - 1)];
        SpectralFunction quotient = make_spectral(freq_grid);
        auto ratio_at = [&](double z) {
            return member.evaluate(z) / evaluate_partial_sum(c, n, z);
        };
        for (std::size_t k = 0; k < freq_grid.points; ++k) {
            const double z = freq_grid.node(k);
            if (std::abs(z) >= static_cast<double>(n) + 1.0) continue;
            const double fn = evaluate_partial_sum(c, n, z);
            if (fn > 0.0) {
                quotient.values[k] = member.evaluate(z) / fn;
            } else {
                // delta_0 = 0 makes F_n vanish at the origin; G_n vanishes
                // there too, so fill the removable 0/0 by extrapolating the
                // symmetric ratio (Richardson, O(h^4))
                const double h = freq_grid.spacing;
                const double a1 = 0.5 * (ratio_at(z + 0.5 * h) + ratio_at(z - 0.5 * h));
                const double a2 = 0.5 * (ratio_at(z + h) + ratio_at(z - h));
                quotient.values[k] = (4.0 * a1 - a2) / 3.0;
            }
        }

        // frequencies offered: |lambda| <= cut * (n+1)
        const double cut = opts.frequency_cut_factor * static_cast<double>(n + 1);
        std::vector<double> offered;
        for (double l : lambda.points)
            if (std::abs(l) <= cut) offered.push_back(l);
        if (offered.empty())
            throw NumericalHazard("construct_generator: no frequencies within the stage cut");
        DiscreteSet stage_lambda = make_discrete_set(std::move(offered), lambda.provenance,
                                                     lambda.provenance_detail, cut);

        FitOptions fopts = opts.fit;
        fopts.residual_bound = c.delta_tilde(n);
        // inset by two cells: at the support edge the zero-extended quotient
        // jumps and its centered difference spikes, neither of which is part
        // of the continuum W([-(n+1), n+1]) objective
        const double inset = 2.0 * freq_grid.spacing;
        const IntervalSpec fit_interval{-(double(n) + 1.0) + inset, double(n) + 1.0 - inset};
        stage.fit = fit_polynomial(quotient, stage_lambda, fit_interval, fopts);
        stage.fit_residual = stage.fit.residual_w;
        stage.fit_converged = stage.fit.converged;
        stage.p_star_norm = polynomial_star_norm(stage.fit, double(stages) + 2.0);
        star_norms.push_back(stage.p_star_norm);
        recipe.stages.push_back(std::move(stage));
    }

    // achieved stage errors against the final F
    SpectralFunction F = partial_sum_F(c, stages, freq_grid);
    for (int n = 1; n <= stages; ++n) {
        StageRecord& stage = recipe.stages[static_cast<std::size_t>(n - 1)];
        SpectralFunction G = family.members[static_cast<std::size_t>(n - 1)].sample(freq_grid);
        SpectralFunction diff = G;
        for (std::size_t k = 0; k < freq_grid.points; ++k) {
            const cplx p = evaluate_polynomial_at(stage.fit, freq_grid.node(k));
            diff.values[k] = G.values[k] - p * F.values[k];
        }
        stage.stage_error = sobolev_norm_full(diff);
    }
    return recipe;
}

CompletenessReport completeness_experiment(const GeneratorRecipe& recipe, const DenseFamily& family,
                                           const SampledFunction& target, double eps, double d0) {
    validate(target);
    CompletenessReport report;
    const double target_norm = h1_norm(target).value;
    if (target_norm == 0.0) {
        report.ok = true;
        return report; // empty combination
    }

    const UniformGrid freq_grid = dual_grid(target.grid);

    // candidate members: index must satisfy d0 eps_N < eps/2, distance < eps/2
    int best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < recipe.stages.size(); ++i) {
        const int N = static_cast<int>(i) + 1;
        if (d0 * recipe.coefficients.epsilon(N) >= eps / 2.0) continue;
        SampledFunction gn = fourier_inverse(family.members[i].sample(freq_grid));
        SampledFunction diff = target;
        for (std::size_t j = 0; j < diff.values.size(); ++j) diff.values[j] -= gn.values[j];
        const double dist = h1_norm(diff).value;
        if (dist < best_dist) {
            best_dist = dist;
            best = N;
        }
    }
    if (best == 0 || best_dist >= eps / 2.0) {
        report.failure = best == 0 ? "no member index satisfies d0 eps_N < eps/2"
                                   : "no family member within eps/2 of the target";
        report.member_distance = best_dist;
        return report;
    }

    const StageRecord& stage = recipe.stages[static_cast<std::size_t>(best - 1)];
    SpectralFunction F = recipe.sample_F(freq_grid);
    SpectralFunction pF = F;
    for (std::size_t k = 0; k < freq_grid.points; ++k)
        pF.values[k] *= evaluate_polynomial_at(stage.fit, freq_grid.node(k));
    SampledFunction approx = fourier_inverse(pF);
    SampledFunction diff = target;
    for (std::size_t j = 0; j < diff.values.size(); ++j) diff.values[j] -= approx.values[j];

    report.stage_used = best;
    report.member_distance = best_dist;
    report.achieved_error_h1 = h1_norm(diff).value;
    report.ok = report.achieved_error_h1 < eps;
    return report;
}

namespace {

double bump_on(const IntervalSpec& J, double t) {
    const double u = (2.0 * t - (J.lo + J.hi)) / (J.hi - J.lo);
    if (std::abs(u) >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - u * u)); // peak 1 at the center
}

} // namespace

PairRecipe build_pair_recipe(const IntervalSpec& I, int range_n) {
    const double len = I.length();
    if (!(len > 0.0 && len < kTwoPi))
        throw ConfigError("build_pair_recipe: need 0 < |I| < 2 pi");
    if (range_n < 1) throw ConfigError("build_pair_recipe: range_n must be >= 1");
    PairRecipe r;
    r.interval_i = I;
    r.interval_j = {I.hi, I.lo + kTwoPi}; // the open gap between I and I + 2 pi
    r.range_n = range_n;

    // is 0 in I + 2 pi Z? otherwise locate the J-cell containing it
    const double k_lo = -I.hi / kTwoPi, k_hi = -I.lo / kTwoPi;
    const bool zero_in_i = std::floor(k_hi + 1e-15) >= std::ceil(k_lo - 1e-15);
    if (!zero_in_i) {
        // n0 with J + 2 pi n0 containing 0
        const int n0 = static_cast<int>(std::floor(-r.interval_j.lo / kTwoPi + 1e-15));
        r.zero_fix_index = n0;
    }
    return r;
}

double PairRecipe::evaluate(double t) const {
    double s = 0.0;
    for (int n = -range_n; n <= range_n; ++n) {
        const double c = std::exp(-std::abs(static_cast<double>(n)));
        double g = bump_on(interval_j, t - kTwoPi * static_cast<double>(n));
        if (zero_fix_index && n == *zero_fix_index)
            g *= 1.0 - std::exp(-t * t); // vanishes only at the origin, smooth
        s += c * g;
    }
    return s;
}

SpectralFunction PairRecipe::sample(const UniformGrid& freq_grid) const {
    SpectralFunction F = make_spectral(freq_grid);
    for (std::size_t k = 0; k < freq_grid.points; ++k)
        F.values[k] = evaluate(freq_grid.node(k));
    return F;
}

PairResult pair_generators(const IntervalSpec& I1, const IntervalSpec& I2,
                           const UniformGrid& freq_grid, int range_n) {
    const IntervalSpec& a = I1.lo <= I2.lo ? I1 : I2;
    const IntervalSpec& b = I1.lo <= I2.lo ? I2 : I1;
    if (!(a.lo <= -kPi && b.hi >= kPi && b.lo <= a.hi))
        throw ConfigError("pair_generators: [-pi, pi] must be covered by I1 u I2");
    PairResult result;
    result.recipe_1 = build_pair_recipe(I1, range_n);
    result.recipe_2 = build_pair_recipe(I2, range_n);
    result.f1_spec = result.recipe_1.sample(freq_grid);
    result.f2_spec = result.recipe_2.sample(freq_grid);
    return result;
}

} // namespace tlab
