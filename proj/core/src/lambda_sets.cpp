#include "tlab/lambda_sets.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>

namespace tlab {

std::string provenance_name(Provenance p) {
    switch (p) {
        case Provenance::integers: return "integers";
        case Provenance::perturbed_integers: return "perturbed_integers";
        case Provenance::multiscale_cluster: return "multiscale_cluster";
        case Provenance::custom: return "custom";
    }
    return "custom";
}

DiscreteSet make_discrete_set(std::vector<double> points, Provenance prov,
                              std::string detail, double truncation_extent) {
    std::sort(points.begin(), points.end());
    for (std::size_t i = 1; i < points.size(); ++i)
        if (!(points[i] > points[i - 1]))
            throw DomainError("DiscreteSet: points must be strictly increasing (repeat near " +
                              std::to_string(points[i]) + ")");
    return {std::move(points), prov, std::move(detail), truncation_extent};
}

DiscreteSet arithmetic_set(double alpha, double T) {
    if (!(alpha > 0.0) || !(T >= alpha)) throw DomainError("arithmetic_set: need alpha > 0, T >= alpha");
    std::vector<double> pts;
    const long N = static_cast<long>(std::floor(T / alpha));
    for (long n = -N; n <= N; ++n) pts.push_back(alpha * static_cast<double>(n));
    std::ostringstream detail;
    detail << "alpha=" << alpha;
    return make_discrete_set(std::move(pts),
                             alpha == 1.0 ? Provenance::integers : Provenance::custom,
                             detail.str(), T);
}

DiscreteSet perturbed_integers(double gamma, double T, std::uint64_t seed) {
    if (!(gamma > 0.0 && gamma < 1.0)) throw DomainError("perturbed_integers: gamma must be in (0,1)");
    if (!(T >= 1.0)) throw DomainError("perturbed_integers: T must be >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> pts;
    const long N = static_cast<long>(std::floor(T));
    for (long n = -N; n <= N; ++n) {
        const double bound = std::pow(gamma, std::abs(static_cast<double>(n)));
        // sign random, magnitude in [bound/2, bound]: never zero, never past the bound
        const double mag = bound * (0.5 + 0.5 * unit(rng));
        const double sign = unit(rng) < 0.5 ? -1.0 : 1.0;
        pts.push_back(static_cast<double>(n) + sign * mag);
    }
    std::ostringstream detail;
    detail << "gamma=" << gamma << " seed=" << seed;
    return make_discrete_set(std::move(pts), Provenance::perturbed_integers, detail.str(), T);
}

DiscreteSet multiscale_cluster(int levels, bool mirror) {
    if (levels < 1) throw DomainError("multiscale_cluster: levels must be >= 1");
    std::vector<double> pts;
    for (int k = 1; k <= levels; ++k) {
        const double lo = std::ldexp(1.0, k);        // 2^k
        const double step = std::ldexp(1.0, -k);     // 2^-k
        const long count = 1L << (2 * k - 1);        // block length 2^{k-1} over step 2^{-k}
        for (long j = 0; j <= count; ++j) pts.push_back(lo + static_cast<double>(j) * step);
    }
    if (mirror) {
        const std::size_t m = pts.size();
        for (std::size_t i = 0; i < m; ++i) pts.push_back(-pts[i]);
    }
    std::ostringstream detail;
    detail << "levels=" << levels << (mirror ? " mirrored" : "");
    const double T = std::ldexp(1.0, levels) + std::ldexp(1.0, levels - 1);
    return make_discrete_set(std::move(pts), Provenance::multiscale_cluster, detail.str(), T);
}

UniformDiscreteness is_uniformly_discrete(const DiscreteSet& lambda, double gap_threshold) {
    if (lambda.points.size() < 2) throw DomainError("is_uniformly_discrete: need at least 2 points");
    double min_gap = lambda.points[1] - lambda.points[0];
    for (std::size_t i = 2; i < lambda.points.size(); ++i)
        min_gap = std::min(min_gap, lambda.points[i] - lambda.points[i - 1]);
    return {min_gap >= gap_threshold, min_gap};
}

std::size_t count_in_interval(const DiscreteSet& lambda, const IntervalSpec& I) {
    auto lo = std::lower_bound(lambda.points.begin(), lambda.points.end(), I.lo);
    auto hi = std::upper_bound(lambda.points.begin(), lambda.points.end(), I.hi);
    return static_cast<std::size_t>(hi - lo);
}

SubstantialFamily substantial_check(const std::vector<IntervalSpec>& intervals) {
    if (intervals.empty()) throw DomainError("substantial_check: empty family");
    std::vector<IntervalSpec> sorted = intervals;
    std::sort(sorted.begin(), sorted.end(),
              [](const IntervalSpec& a, const IntervalSpec& b) { return a.lo < b.lo; });
    const bool positive_axis = sorted.front().lo > 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const IntervalSpec& I = sorted[i];
        if (!(I.length() > 1.0))
            throw DomainError("substantial_check: interval length must exceed 1");
        const bool pos = I.lo > 0.0, neg = I.hi < 0.0;
        if (!(pos || neg)) throw DomainError("substantial_check: interval touches 0");
        if (pos != positive_axis) throw DomainError("substantial_check: intervals must share one half-axis");
        if (i > 0 && !(sorted[i].lo > sorted[i - 1].hi))
            throw DomainError("substantial_check: intervals overlap");
    }

    SubstantialFamily fam;
    fam.intervals = sorted;
    std::vector<double> ratios;
    for (const IntervalSpec& I : sorted) {
        const double dist = I.lo > 0.0 ? I.lo : -I.hi; // nearest endpoint to 0
        const double ratio = I.length() / dist;
        ratios.push_back(ratio);
        fam.divergence_partial += ratio * ratio;
    }
    // Registered divergent form: geometric anchors with a constant
    // normalized length, whose series has constant terms.
    if (ratios.size() >= 3) {
        const double r0 = ratios.front();
        fam.extrapolation_flag =
            std::all_of(ratios.begin(), ratios.end(),
                        [&](double r) { return std::abs(r - r0) <= 1e-9 * std::max(1.0, r0); });
    }
    return fam;
}

DensityEstimate bm_density_estimate(const DiscreteSet& lambda, const std::vector<double>& d_grid,
                                    const DensityConfig& cfg) {
    if (lambda.points.empty()) throw DomainError("bm_density_estimate: empty set");
    if (d_grid.empty()) throw ConfigError("bm_density_estimate: empty D grid");
    for (std::size_t i = 1; i < d_grid.size(); ++i)
        if (!(d_grid[i] > d_grid[i - 1]))
            throw ConfigError("bm_density_estimate: D grid must be increasing");

    const double T = lambda.truncation_extent > 0.0
                         ? lambda.truncation_extent
                         : std::max(std::abs(lambda.points.front()), std::abs(lambda.points.back()));

    // A witness is a truncated geometric-anchor family I_k = [2^k, (1+beta) 2^k],
    // k = k_start .. (truncation window). Every represented interval must meet
    // the counting condition: the extrapolated family is infinite, so a single
    // failing k inside the window falsifies it. Dropping a finite head
    // (k_start > 1) keeps the extrapolated series divergent.
    auto witness_for = [&](double D) -> std::optional<std::vector<IntervalSpec>> {
        for (double beta : cfg.beta_candidates) {
            for (int k_start = 1; k_start <= 3; ++k_start) {
                std::vector<IntervalSpec> family;
                bool failed = false;
                for (int k = k_start;; ++k) {
                    const double lo = std::ldexp(1.0, k);
                    const double len = beta * lo;
                    if (lo + len > T) break;
                    if (!(len > 1.0)) continue;
                    // half-open cell [lo, lo + len): beta = 1 anchors tile the
                    // axis, so the shared endpoint must not be double counted
                    // (and the witness family must stay strictly disjoint)
                    IntervalSpec I{lo, std::nextafter(lo + len, lo)};
                    if (static_cast<double>(count_in_interval(lambda, I)) + 1e-12 >= D * len) {
                        family.push_back(I);
                    } else {
                        failed = true;
                        break;
                    }
                }
                if (!failed && family.size() >= cfg.min_intervals) return family;
            }
        }
        return std::nullopt;
    };

    DensityEstimate est;
    bool all_pass = true;
    for (double D : d_grid) {
        auto w = witness_for(D);
        if (w) {
            est.lower_bound = D;
            est.witness = substantial_check(*w);
        } else {
            all_pass = false;
        }
    }
    est.classification = all_pass ? DensityClass::infinite_flagged : DensityClass::finite;
    return est;
}

Eigen::MatrixXd exponential_gram(const DiscreteSet& lambda, double r) {
    if (!(r > 0.0)) throw DomainError("exponential_gram: r must be positive");
    const std::size_t n = lambda.points.size();
    if (n > kGramCap)
        throw ResourceError("exponential_gram: |Lambda| = " + std::to_string(n) +
                            " exceeds the cap " + std::to_string(kGramCap));
    Eigen::MatrixXd G(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        G(j, j) = 2.0 * r;
        for (std::size_t k = j + 1; k < n; ++k) {
            const double mu = lambda.points[j] - lambda.points[k];
            const double v = 2.0 * std::sin(mu * r) / mu;
            G(j, k) = v;
            G(k, j) = v;
        }
    }
    return G;
}

namespace {

// Frequencies offered at a truncation level: the N points of smallest |lambda|.
DiscreteSet truncate_by_magnitude(const DiscreteSet& lambda, std::size_t N) {
    std::vector<double> pts = lambda.points;
    std::sort(pts.begin(), pts.end(),
              [](double a, double b) { return std::abs(a) < std::abs(b); });
    if (pts.size() > N) pts.resize(N);
    return make_discrete_set(std::move(pts), lambda.provenance, lambda.provenance_detail,
                             lambda.truncation_extent);
}

} // namespace

ProbeResult spectral_radius_probe(const DiscreteSet& lambda,
                                  const std::vector<SampledFunction>& targets,
                                  const std::vector<double>& r_grid,
                                  const ProbeConfig& cfg) {
    for (const auto& t : targets) validate(t);
    if (targets.empty() || r_grid.empty()) throw ConfigError("spectral_radius_probe: empty inputs");

    std::vector<std::size_t> truncations = cfg.truncations;
    for (std::size_t& N : truncations) N = std::min(N, lambda.points.size());
    truncations.erase(std::unique(truncations.begin(), truncations.end()), truncations.end());

    ProbeResult result;
    result.curve.resize(r_grid.size() * truncations.size() * targets.size());

    auto run_r = [&](std::size_t ri) {
        const double r = r_grid[ri];
        for (std::size_t ti = 0; ti < truncations.size(); ++ti) {
            const DiscreteSet trunc = truncate_by_magnitude(lambda, truncations[ti]);
            const std::size_t m = trunc.points.size();

            for (std::size_t gi = 0; gi < targets.size(); ++gi) {
                const SampledFunction& tgt = targets[gi];
                const UniformGrid& g = tgt.grid;
                // trapezoid over the nodes inside [-r, r], half weights at the
                // window boundary; the Gram uses the same discrete measure so
                // the solve minimizes exactly the reported residual
                const long j_lo = std::max<long>(
                    0, static_cast<long>(std::ceil((-r + g.half_extent) / g.spacing - 1e-12)));
                const long j_hi = std::min<long>(
                    static_cast<long>(g.points) - 1,
                    static_cast<long>(std::floor((r + g.half_extent) / g.spacing + 1e-12)));
                auto weight = [&](long p) { return (p == j_lo || p == j_hi) ? 0.5 : 1.0; };
                const double h = g.spacing;
                const double t0 = g.node(static_cast<std::size_t>(j_lo));
                const double t1 = g.node(static_cast<std::size_t>(j_hi));
                const double count = static_cast<double>(j_hi - j_lo + 1);
                auto window_sum = [&](double mu) -> cplx {
                    // h * sum_p w_p e^{i mu t_p}, geometric series in closed form
                    const cplx i{0.0, 1.0};
                    cplx total;
                    if (std::abs(mu * h) < 1e-10) {
                        total = cplx{count, 0.0};
                    } else {
                        const cplx q = std::exp(i * (mu * h));
                        total = std::exp(i * (mu * t0)) *
                                (std::exp(i * (mu * h * count)) - 1.0) / (q - 1.0);
                    }
                    total -= 0.5 * (std::exp(i * (mu * t0)) + std::exp(i * (mu * t1)));
                    return h * total;
                };
                Eigen::MatrixXcd A(m, m);
                for (std::size_t j = 0; j < m; ++j)
                    for (std::size_t k = 0; k < m; ++k)
                        A(j, k) = window_sum(trunc.points[k] - trunc.points[j]);
                const double ridge = cfg.ridge_scale * std::abs(A.trace()) / static_cast<double>(m);
                A += ridge * Eigen::MatrixXcd::Identity(m, m);
                Eigen::LDLT<Eigen::MatrixXcd> solver(A);
                const bool rank_warning = solver.info() != Eigen::Success ||
                                          solver.vectorD().real().minCoeff() < 0.5 * ridge;

                Eigen::VectorXcd b(m);
                for (std::size_t j = 0; j < m; ++j) {
                    cplx s{0.0, 0.0};
                    for (long p = j_lo; p <= j_hi; ++p) {
                        const double t = g.node(static_cast<std::size_t>(p));
                        s += weight(p) * tgt.values[static_cast<std::size_t>(p)] *
                             std::exp(cplx{0.0, -trunc.points[j] * t});
                    }
                    b(j) = s * h;
                }
                Eigen::VectorXcd c = solver.solve(b);
                double num = 0.0, den = 0.0;
                for (long p = j_lo; p <= j_hi; ++p) {
                    const double t = g.node(static_cast<std::size_t>(p));
                    cplx proj{0.0, 0.0};
                    for (std::size_t j = 0; j < m; ++j)
                        proj += c(j) * std::exp(cplx{0.0, trunc.points[j] * t});
                    num += weight(p) * std::norm(tgt.values[static_cast<std::size_t>(p)] - proj);
                    den += weight(p) * std::norm(tgt.values[static_cast<std::size_t>(p)]);
                }
                ProbePoint pt;
                pt.r = r;
                pt.truncation = truncations[ti];
                pt.target_index = gi;
                pt.residual = den > 0.0 ? std::sqrt(num / den) : 0.0;
                pt.rank_warning = rank_warning;
                result.curve[(ri * truncations.size() + ti) * targets.size() + gi] = pt;
            }
        }
    };

    if (cfg.jobs > 1) {
        std::vector<std::thread> pool;
        std::size_t next = 0;
        std::mutex mu;
        for (int w = 0; w < cfg.jobs; ++w)
            pool.emplace_back([&] {
                for (;;) {
                    std::size_t ri;
                    {
                        std::lock_guard<std::mutex> lock(mu);
                        if (next >= r_grid.size()) return;
                        ri = next++;
                    }
                    run_r(ri);
                }
            });
        for (auto& th : pool) th.join();
    } else {
        for (std::size_t ri = 0; ri < r_grid.size(); ++ri) run_r(ri);
    }

    // empirical R: largest r whose residual at the final truncation level is
    // below threshold for every target
    const std::size_t tlast = truncations.size() - 1;
    for (std::size_t ri = 0; ri < r_grid.size(); ++ri) {
        bool ok = true;
        for (std::size_t gi = 0; gi < targets.size(); ++gi) {
            const ProbePoint& pt = result.curve[(ri * truncations.size() + tlast) * targets.size() + gi];
            if (pt.residual >= cfg.residual_threshold) ok = false;
        }
        if (ok) result.empirical_radius = std::max(result.empirical_radius, r_grid[ri]);
    }
    return result;
}

void save_discrete_set(const DiscreteSet& lambda, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("save_discrete_set: cannot open " + path);
    out << "# provenance: " << provenance_name(lambda.provenance);
    if (!lambda.provenance_detail.empty()) out << " " << lambda.provenance_detail;
    out << "\n# truncation_extent: " << lambda.truncation_extent << "\n";
    out.precision(17);
    for (double p : lambda.points) out << p << "\n";
}

DiscreteSet load_discrete_set(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("load_discrete_set: cannot open " + path);
    std::vector<double> pts;
    Provenance prov = Provenance::custom;
    std::string detail;
    double T = 0.0;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream ls(line.substr(1));
            std::string key;
            ls >> key;
            if (key == "provenance:") {
                std::string name;
                ls >> name;
                for (Provenance p : {Provenance::integers, Provenance::perturbed_integers,
                                     Provenance::multiscale_cluster, Provenance::custom})
                    if (provenance_name(p) == name) prov = p;
                std::getline(ls, detail);
            } else if (key == "truncation_extent:") {
                ls >> T;
            }
            continue;
        }
        pts.push_back(std::stod(line));
    }
    if (T == 0.0 && !pts.empty())
        T = std::max(std::abs(pts.front()), std::abs(pts.back()));
    return make_discrete_set(std::move(pts), prov, detail, T);
}

} // namespace tlab
