#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "tlab/generators.hpp"

using namespace tlab;

TEST_CASE("tent_phi values") {
    CHECK(tent_phi(0.0) == 1.0);
    CHECK(tent_phi(0.5) == 0.5);
    CHECK(tent_phi(-0.5) == 0.5);
    CHECK(tent_phi(1.0) == 0.0);
    CHECK(tent_phi(2.0) == 0.0);
}

TEST_CASE("default_schedule shape") {
    auto c = default_schedule(4);
    REQUIRE(c.epsilons.size() == 5);
    CHECK(c.epsilon(1) == doctest::Approx(0.25));
    CHECK(c.epsilon(2) == doctest::Approx(0.125));
    CHECK(c.delta(0) == 0.0);
    CHECK(c.delta(1) == doctest::Approx(0.125)); // eps_1 - eps_2
    CHECK(c.delta(-1) == c.delta(1));            // symmetric
    CHECK(c.delta_tilde(1) == doctest::Approx(c.delta(1)));
    CHECK_NOTHROW(c.check());
    // telescoping identity: sum_{k > n} delta_tilde(k) = eps_{n+1}
    double tail = 0.0;
    for (int k = 2; k <= 4; ++k) tail += c.delta_tilde(k);
    CHECK(std::abs(tail + c.epsilon(5) - c.epsilon(2)) < 1e-14);
}

TEST_CASE("TentCoefficients::check rejects broken schedules") {
    auto c = default_schedule(3);
    c.epsilons[1] = 0.3; // not decreasing
    CHECK_THROWS_AS(c.check(), DomainError);
    c = default_schedule(3);
    c.deltas[0] = 0.1;
    CHECK_THROWS_AS(c.check(), DomainError);
    c = default_schedule(3);
    c.deltas[1] = 0.2; // != eps_1 - eps_2
    CHECK_THROWS_AS(c.check(), DomainError);
}

TEST_CASE("partial_sum_F: support and increments") {
    auto c = default_schedule(4);
    for (int n = 2; n <= 4; ++n) c.set_delta(n, c.delta_tilde(n) / 4.0);
    auto g = make_grid(8.0, 512);
    for (int n = 1; n <= 4; ++n) {
        auto F = partial_sum_F(c, n, g);
        for (std::size_t j = 0; j < g.points; ++j)
            if (std::abs(g.node(j)) > n + 1.0) CHECK(F.values[j] == cplx(0.0, 0.0));
        CHECK(F.values[g.center_index()] == cplx(0.0, 0.0)); // delta_0 = 0
    }
    // || F_n - F_{n-1} ||_W < 4 delta_n: the increment is delta_n (tent at n + tent at -n)
    for (int n = 2; n <= 4; ++n) {
        auto Fn = partial_sum_F(c, n, g);
        auto Fm = partial_sum_F(c, n - 1, g);
        for (std::size_t j = 0; j < g.points; ++j) Fn.values[j] -= Fm.values[j];
        CHECK(sobolev_norm_full(Fn) < 4.0 * c.delta(n));
    }
    // star norm: sup F_n = max delta, sup |F_n'| = max delta (unit slopes)
    auto F4 = partial_sum_F(c, 4, g);
    double maxd = 0.0;
    for (int i = 1; i <= 4; ++i) maxd = std::max(maxd, c.delta(i));
    CHECK(star_norm(F4) <= 2.0 * maxd + 1e-12);
}

TEST_CASE("partial_sum_F: missing coefficient is a config error") {
    auto c = default_schedule(2);
    auto g = make_grid(8.0, 256);
    CHECK_THROWS_AS(partial_sum_F(c, 2, g), ConfigError); // delta_2 never set
}

TEST_CASE("build_dense_family: anchors of the induction") {
    auto fam = build_dense_family(5, 42);
    REQUIRE(fam.members.size() == 5);
    CHECK(fam.members[0].evaluate(0.3) == 0.0); // G_1 = 0
    for (int n = 2; n <= 5; ++n) {
        const auto& m = fam.members[n - 1];
        CHECK(m.evaluate(0.0) == 0.0);
        CHECK(m.evaluate(double(n) + 1.5) == 0.0); // outside the support
        for (const auto& b : m.bumps) {
            CHECK(b.carrier >= 8.0);
            CHECK(b.carrier <= 12.0);
            // line frequency on the 2^-3 rational grid
            CHECK(std::abs(b.carrier * 8.0 - std::round(b.carrier * 8.0)) < 1e-12);
        }
    }
    // deterministic per seed
    auto again = build_dense_family(5, 42);
    CHECK(again.members[2].evaluate(1.7) == fam.members[2].evaluate(1.7));
    auto other = build_dense_family(5, 43);
    CHECK(other.members[2].evaluate(1.7) != fam.members[2].evaluate(1.7));
    CHECK(fam.support(3).lo == -4.0);
    CHECK(fam.support(3).hi == 4.0);
}

TEST_CASE("fit_polynomial: zero target") {
    auto g = make_grid(8.0, 512);
    auto target = make_spectral(g);
    auto lam = arithmetic_set(1.0, 10.0);
    auto fit = fit_polynomial(target, lam, make_interval(-2.0, 2.0));
    CHECK(fit.residual_w == doctest::Approx(0.0).epsilon(1e-14));
    for (auto c : fit.coefficients) CHECK(std::abs(c) < 1e-12);
}

TEST_CASE("fit_polynomial: exact recovery of a basis exponential") {
    auto g = make_grid(8.0, 512);
    auto target = make_spectral(g);
    for (std::size_t j = 0; j < g.points; ++j) {
        double t = g.node(j);
        target.values[j] = cplx(std::cos(t), std::sin(t)); // e^{i t}, lambda_0 = 1
    }
    auto lam = arithmetic_set(1.0, 10.0);
    FitOptions opts;
    opts.residual_bound = 1e-11; // drives the ridge sweep below the 1e-10 oracle
    auto fit = fit_polynomial(target, lam, make_interval(-3.0, 3.0), opts);
    CHECK(fit.converged);
    CHECK(fit.residual_w < 1e-10);
    double active = 0.0, rest = 0.0;
    for (std::size_t j = 0; j < fit.frequencies.size(); ++j) {
        if (fit.frequencies[j] == 1.0)
            active = std::abs(fit.coefficients[j]);
        else
            rest = std::max(rest, std::abs(fit.coefficients[j]));
    }
    CHECK(active == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(rest < 1e-8);
}

TEST_CASE("fit_polynomial: residual decreases under max_terms doubling") {
    auto g = make_grid(8.0, 512);
    auto target = sample_tent(g);
    auto lam = arithmetic_set(0.25, 30.0);
    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t m : {15u, 30u, 60u, 120u}) {
        FitOptions opts;
        opts.max_terms = m;
        double res = fit_polynomial(target, lam, make_interval(-2.0, 2.0), opts).residual_w;
        CHECK(res <= prev + 1e-10);
        prev = res;
    }
    CHECK(prev < 0.5);
}

TEST_CASE("construct_generator: two quick stages") {
    auto lam = multiscale_cluster(4);
    auto fam = build_dense_family(2, 7);
    auto g = make_grid(8.0, 512);
    auto recipe = construct_generator(lam, fam, 2, g);
    REQUIRE(recipe.stages.size() == 2);
    // stage 1: p_1 fitted to G_1 = 0
    CHECK(recipe.stages[0].fit_residual < recipe.coefficients.delta_tilde(1));
    // defining estimate per stage
    for (const auto& s : recipe.stages) {
        CHECK(s.stage_error < recipe.coefficients.epsilon(s.n));
        CHECK(s.min_on_support > 0.0);
        CHECK(s.fit_converged);
        // frequencies come from Lambda only
        for (double f : s.fit.frequencies)
            CHECK(std::binary_search(lam.points.begin(), lam.points.end(), f));
    }
    // F is nonnegative with F(0) = 0
    auto F = recipe.sample_F(g);
    for (std::size_t j = 0; j < g.points; ++j) CHECK(F.values[j].real() >= 0.0);
    CHECK(F.values[g.center_index()] == cplx(0.0, 0.0));
    CHECK_FALSE(recipe.density_warning); // multiscale is infinite-flagged
}

TEST_CASE("construct_generator: finite-density set raises the warning") {
    auto lam = arithmetic_set(1.0, 16.0);
    auto fam = build_dense_family(1, 7);
    auto g = make_grid(4.0, 256);
    auto recipe = construct_generator(lam, fam, 1, g);
    CHECK(recipe.density_warning);
}

TEST_CASE("completeness_experiment: zero target is free") {
    auto lam = multiscale_cluster(4);
    auto fam = build_dense_family(2, 7);
    auto g = make_grid(8.0, 512);
    auto recipe = construct_generator(lam, fam, 2, g);
    auto target = make_sampled(make_grid(kPi / g.spacing, g.points)); // spatial dual
    auto rep = completeness_experiment(recipe, fam, target, 0.1, 1.6);
    CHECK(rep.ok);
    CHECK(rep.achieved_error_h1 == 0.0);
}

TEST_CASE("build_pair_recipe: interval algebra") {
    auto r = build_pair_recipe(make_interval(0.5, 2.0), 4);
    CHECK(r.interval_i.length() + r.interval_j.length() == doctest::Approx(kTwoPi).epsilon(1e-12));
    CHECK(r.interval_j.lo == doctest::Approx(2.0));
    REQUIRE(r.zero_fix_index.has_value());
    // 0 sits in J + 2 pi n0
    double lo = r.interval_j.lo + kTwoPi * (*r.zero_fix_index);
    double hi = r.interval_j.hi + kTwoPi * (*r.zero_fix_index);
    CHECK(lo < 0.0);
    CHECK(hi > 0.0);
    // when 0 is already in I + 2 pi Z no fix is needed
    auto centered = build_pair_recipe(make_interval(-1.0, 1.0), 4);
    CHECK_FALSE(centered.zero_fix_index.has_value());
    CHECK_THROWS_AS(build_pair_recipe(make_interval(0.0, 7.0), 4), ConfigError);
}

TEST_CASE("pair_generators: zero set and positivity") {
    auto g = make_grid(32.0, 1024);
    auto I1 = make_interval(-3.3, 0.1);
    auto I2 = make_interval(-0.1, 3.3);
    auto pr = pair_generators(I1, I2, g, 5);
    // F vanishes on I + 2 pi k and at 0
    for (int k = -2; k <= 2; ++k) {
        double probe = -1.5 + kTwoPi * k; // interior of I1
        CHECK(std::abs(pr.recipe_1.evaluate(probe)) < 1e-12);
    }
    CHECK(pr.recipe_1.evaluate(0.0) == 0.0);
    CHECK(pr.recipe_2.evaluate(0.0) == 0.0);
    // positive in the middle of the gap cells
    double jmid = 0.5 * (pr.recipe_1.interval_j.lo + pr.recipe_1.interval_j.hi);
    CHECK(pr.recipe_1.evaluate(jmid) > 0.0);
    CHECK(pr.recipe_1.evaluate(jmid + kTwoPi) > 0.0);
    // sampled copies agree with the closures
    CHECK(pr.f1_spec.values[g.center_index()] == cplx(0.0, 0.0));
    // coverage precondition
    CHECK_THROWS_AS(pair_generators(make_interval(-3.0, 0.1), make_interval(-0.1, 3.0), g, 5),
                    ConfigError);
}
