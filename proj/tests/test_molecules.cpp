#include <doctest.h>

#include <cmath>
#include <random>

#include "tlab/molecules.hpp"

using namespace tlab;

namespace {

SampledFunction sample_on(const UniformGrid& g, double (*fn)(double)) {
    auto f = make_sampled(g);
    for (std::size_t j = 0; j < g.points; ++j) f.values[j] = fn(g.node(j));
    return f;
}

} // namespace

TEST_CASE("molecule_params: derived exponent b0 = 1 - 1/q + a0") {
    auto p = molecule_params(2.0, 0.5);
    CHECK(p.b0 == doctest::Approx(1.0));
    CHECK(p.exponent() == doctest::Approx(0.5));
    auto pinf = molecule_params(lp_infinity, 1.0);
    CHECK(pinf.b0 == doctest::Approx(2.0));
    CHECK(pinf.exponent() == doctest::Approx(0.5));
    CHECK_THROWS_AS(molecule_params(1.0, 0.5), DomainError);  // q must exceed 1
    CHECK_THROWS_AS(molecule_params(2.0, 0.0), DomainError);  // a0 must be positive
}

TEST_CASE("assess_molecule: odd Gaussian bump qualifies") {
    auto g = make_grid(16.0, 1024);
    auto m = sample_on(g, +[](double x) { return x * std::exp(-x * x); });
    auto r = assess_molecule(m, molecule_params(2.0, 0.5));
    CHECK(r.is_molecule);
    CHECK(std::abs(r.cancellation) < 1e-10);
    CHECK(r.lq_norm > 0.0);
    CHECK(r.weighted_norm > 0.0);
}

TEST_CASE("assess_molecule: plain Gaussian fails cancellation") {
    auto g = make_grid(16.0, 1024);
    auto m = sample_on(g, +[](double x) { return std::exp(-x * x); });
    auto r = assess_molecule(m, molecule_params(2.0, 0.5));
    CHECK_FALSE(r.is_molecule);
    CHECK(r.cancellation.real() == doctest::Approx(std::sqrt(kPi)).epsilon(1e-8));
}

TEST_CASE("assess_molecule: molecular norm homogeneity via AM-GM split") {
    // N_q(m) = ||m||_q^{1-a0/b0} ||m |.-x0|^{b0}||_q^{a0/b0}; scaling m by c
    // scales N_q by |c| exactly
    auto g = make_grid(16.0, 512);
    auto m = sample_on(g, +[](double x) { return x * std::exp(-x * x / 2.0); });
    auto p = molecule_params(2.0, 0.5);
    auto base = assess_molecule(m, p);
    auto scaled = m;
    for (auto& v : scaled.values) v *= 5.0;
    auto r5 = assess_molecule(scaled, p);
    CHECK(r5.molecular_norm == doctest::Approx(5.0 * base.molecular_norm).epsilon(1e-10));
    // AM-GM: geometric mean below the weighted arithmetic mean
    double theta = p.exponent();
    double am = theta * base.lq_norm + (1.0 - theta) * base.weighted_norm;
    CHECK(base.molecular_norm <= am + 1e-12 * am);
}

TEST_CASE("assess_molecule: off-center weight") {
    auto g = make_grid(16.0, 512);
    auto m = make_sampled(g);
    for (std::size_t j = 0; j < g.points; ++j) {
        double x = g.node(j) - 3.0;
        m.values[j] = x * std::exp(-x * x);
    }
    auto centered = assess_molecule(m, molecule_params(2.0, 0.5, 3.0));
    auto wrong = assess_molecule(m, molecule_params(2.0, 0.5, 0.0));
    CHECK(centered.is_molecule);
    CHECK(centered.weighted_norm < wrong.weighted_norm); // weight is smallest at the true center
}

TEST_CASE("embedding_check: requires vanishing at zero") {
    auto g = make_grid(8.0, 512);
    auto F = make_spectral(g);
    for (std::size_t j = 0; j < g.points; ++j) F.values[j] = std::exp(-g.node(j) * g.node(j));
    CHECK_THROWS_AS(embedding_check(F), DomainError);
}

TEST_CASE("embedding_check: zero input gives ratio 0 by convention") {
    auto g = make_grid(8.0, 512);
    auto r = embedding_check(make_spectral(g));
    CHECK(r.ratio == 0.0);
    CHECK(r.x_norm == 0.0);
    CHECK(r.w_norm == 0.0);
}

TEST_CASE("embedding_check: random tent combinations keep the ratio bounded") {
    auto g = make_grid(8.0, 512);
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        auto F = make_spectral(g);
        for (int c = 1; c <= 4; ++c) {
            double amp = u(rng);
            for (std::size_t j = 0; j < g.points; ++j) {
                double z = g.node(j);
                F.values[j] += amp * (std::max(0.0, 1.0 - std::abs(z - c)) +
                                      std::max(0.0, 1.0 - std::abs(z + c)));
            }
        }
        auto r = embedding_check(F);
        CHECK(r.w_norm > 0.0);
        worst = std::max(worst, r.ratio);
    }
    CHECK(worst < 50.0); // desk-scale d0 stays bounded
}
