#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tlab/norms.hpp"

namespace tlab {

enum class Provenance { integers, perturbed_integers, multiscale_cluster, custom };

std::string provenance_name(Provenance p);

/// Finite, sorted, strictly increasing point set Lambda restricted to
/// |lambda| <= truncation_extent.
struct DiscreteSet {
    std::vector<double> points;
    Provenance provenance = Provenance::custom;
    std::string provenance_detail; // e.g. "gamma=0.5 seed=7"
    double truncation_extent = 0.0;
};

DiscreteSet make_discrete_set(std::vector<double> points, Provenance prov,
                              std::string detail, double truncation_extent);

/// {alpha n : |alpha n| <= T}; alpha = 1 gives the integers.
DiscreteSet arithmetic_set(double alpha, double T);

/// {n + r_n : |n| <= T} with sign-random r_n, gamma^{|n|}/2 <= |r_n| <= gamma^{|n|},
/// deterministic per seed.
DiscreteSet perturbed_integers(double gamma, double T, std::uint64_t seed);

/// Blocks [2^k, 2^k + 2^{k-1}] with spacing 2^{-k}, k = 1..levels, mirrored to
/// the negative axis. Infinite BM density at scale (each block carries density
/// 2^k per unit length).
DiscreteSet multiscale_cluster(int levels, bool mirror = true);

struct UniformDiscreteness {
    bool answer = false;
    double min_gap = 0.0;
};

UniformDiscreteness is_uniformly_discrete(const DiscreteSet& lambda, double gap_threshold = 0.01);

std::size_t count_in_interval(const DiscreteSet& lambda, const IntervalSpec& I);

struct SubstantialFamily {
    std::vector<IntervalSpec> intervals;
    double divergence_partial = 0.0; // sum (|I_k| / dist(I_k, 0))^2 over the family
    bool extrapolation_flag = false; // family matches a registered divergent parametric form
};

/// Validates disjointness / half-axis / |I| > 1, computes the partial series,
/// and flags divergence only for the registered geometric-anchor family
/// (>= 3 intervals with constant |I|/dist ratio).
SubstantialFamily substantial_check(const std::vector<IntervalSpec>& intervals);

enum class DensityClass { finite, infinite_flagged };

struct DensityEstimate {
    double lower_bound = 0.0;
    DensityClass classification = DensityClass::finite;
    SubstantialFamily witness;
};

struct DensityConfig {
    std::vector<double> beta_candidates{0.5, 1.0, 0.25}; // |I_k| = beta 2^k
    std::size_t min_intervals = 3;                       // K in the spec
};

/// Certified lower bound on the Beurling-Malliavin density, restricted to the
/// geometric anchor family I_k = [2^k, (1+beta) 2^k]. infinite_flagged when
/// every D in the grid admits a witness.
DensityEstimate bm_density_estimate(const DiscreteSet& lambda, const std::vector<double>& d_grid,
                                    const DensityConfig& cfg = {});

inline constexpr std::size_t kGramCap = 400;

/// G_{jk} = int_{-r}^{r} e^{i (lambda_j - lambda_k) t} dt; real symmetric PSD.
Eigen::MatrixXd exponential_gram(const DiscreteSet& lambda, double r);

struct ProbePoint {
    double r = 0.0;
    std::size_t truncation = 0; // number of frequencies offered
    std::size_t target_index = 0;
    double residual = 0.0;      // relative L^2(-r, r) residual
    bool rank_warning = false;
};

struct ProbeResult {
    std::vector<ProbePoint> curve;
    double empirical_radius = 0.0; // largest r whose final-truncation residual clears the threshold
};

struct ProbeConfig {
    std::vector<std::size_t> truncations{25, 50, 100, 200};
    double residual_threshold = 1e-3;
    double ridge_scale = 1e-10; // lambda_ridge = ridge_scale * trace(G) / n
    int jobs = 1;
};

/// Least-squares projection of each target onto span{e^{i lambda t}} in
/// L^2(-r, r), per r in r_grid and per truncation level.
ProbeResult spectral_radius_probe(const DiscreteSet& lambda,
                                  const std::vector<SampledFunction>& targets,
                                  const std::vector<double>& r_grid,
                                  const ProbeConfig& cfg = {});

/// One point per line, `# provenance: ...` header.
void save_discrete_set(const DiscreteSet& lambda, const std::string& path);
DiscreteSet load_discrete_set(const std::string& path);

} // namespace tlab
