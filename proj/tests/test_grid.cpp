#include <doctest.h>

#include <cmath>

#include "tlab/grid.hpp"
#include "tlab/transforms.hpp"

using namespace tlab;

TEST_CASE("make_grid basic shape") {
    auto g = make_grid(8.0, 16);
    CHECK(g.half_extent == 8.0);
    CHECK(g.points == 16);
    CHECK(g.spacing == doctest::Approx(1.0));
    CHECK(g.node(0) == doctest::Approx(-8.0));
    CHECK(g.node(g.center_index()) == doctest::Approx(0.0));
    // last node is L - h, the open end of [-L, L)
    CHECK(g.node(g.points - 1) == doctest::Approx(7.0));
}

TEST_CASE("make_grid rejects bad shapes") {
    CHECK_THROWS_AS(make_grid(0.0, 16), ConfigError);
    CHECK_THROWS_AS(make_grid(-1.0, 16), ConfigError);
    CHECK_THROWS_AS(make_grid(8.0, 17), ConfigError);   // not a power of two
    CHECK_THROWS_AS(make_grid(8.0, 4), ConfigError);    // below minimum size
}

TEST_CASE("dual grid is Nyquist-matched") {
    auto g = make_grid(16.0, 256);
    auto d = dual_grid(g);
    CHECK(d.points == g.points);
    CHECK(d.spacing == doctest::Approx(kPi / g.half_extent));
    CHECK(d.half_extent == doctest::Approx(kPi / g.spacing));
}

TEST_CASE("validate rejects shape and finiteness violations") {
    auto g = make_grid(4.0, 16);
    auto f = make_sampled(g);
    CHECK_NOTHROW(validate(f));
    f.values.pop_back();
    CHECK_THROWS_AS(validate(f), DomainError);
    f = make_sampled(g);
    f.values[3] = cplx(std::nan(""), 0.0);
    CHECK_THROWS_AS(validate(f), DomainError);
}

TEST_CASE("integrate: Gaussian matches sqrt(pi)") {
    auto g = make_grid(8.0, 1024);
    auto f = make_sampled(g);
    for (std::size_t j = 0; j < g.points; ++j) {
        double x = g.node(j);
        f.values[j] = std::exp(-x * x);
    }
    CHECK(integrate(f).real() == doctest::Approx(std::sqrt(kPi)).epsilon(1e-8));
    CHECK(std::abs(integrate(f).imag()) < 1e-14);
}

TEST_CASE("integrate: odd integrand is exactly zero") {
    // node set is symmetric except for the lone -L endpoint, where an odd
    // grid-supported integrand must vanish anyway if it is supported inside
    auto g = make_grid(8.0, 256);
    auto f = make_sampled(g);
    for (std::size_t j = 0; j < g.points; ++j) {
        double x = g.node(j);
        f.values[j] = x * std::exp(-x * x);
    }
    CHECK(std::abs(integrate(f)) < 1e-13);
}

TEST_CASE("integrate is linear") {
    auto g = make_grid(4.0, 64);
    auto a = make_sampled(g), b = make_sampled(g), c = make_sampled(g);
    for (std::size_t j = 0; j < g.points; ++j) {
        double x = g.node(j);
        a.values[j] = std::cos(x);
        b.values[j] = cplx(0.0, x * x);
        c.values[j] = 2.0 * a.values[j] - 3.0 * b.values[j];
    }
    cplx lhs = integrate(c);
    cplx rhs = 2.0 * integrate(a) - 3.0 * integrate(b);
    CHECK(std::abs(lhs - rhs) < 1e-13);
}

TEST_CASE("integrate_abs2_window: half weights at the window boundary") {
    auto g = make_grid(4.0, 64);
    std::vector<cplx> ones(g.points, cplx(1.0, 0.0));
    // window [-1, 1]: 17 nodes, trapezoid mass = 16 h = 2
    CHECK(integrate_abs2_window(ones, g, -1.0, 1.0) == doctest::Approx(2.0));
    CHECK(integrate_abs2_window(ones, g, -4.0, 3.875) == doctest::Approx(7.875));
}

TEST_CASE("resample: identity on the same grid") {
    auto g = make_grid(4.0, 64);
    auto f = make_sampled(g);
    for (std::size_t j = 0; j < g.points; ++j) f.values[j] = std::sin(g.node(j));
    auto r = resample(f, g);
    for (std::size_t j = 0; j < g.points; ++j) CHECK(std::abs(r.values[j] - f.values[j]) < 1e-15);
}

TEST_CASE("resample: piecewise linear data survives refinement exactly") {
    auto coarse = make_grid(4.0, 32);
    auto fine = make_grid(4.0, 128);
    auto f = make_sampled(coarse);
    for (std::size_t j = 0; j < coarse.points; ++j) {
        double x = coarse.node(j);
        f.values[j] = std::max(0.0, 1.0 - std::abs(x)); // tent, kinks on nodes
    }
    auto r = resample(f, fine);
    for (std::size_t j = 0; j < fine.points; ++j) {
        double x = fine.node(j);
        double want = std::max(0.0, 1.0 - std::abs(x));
        CHECK(std::abs(r.values[j] - want) < 1e-14);
    }
}

TEST_CASE("resample rejects extent growth") {
    auto g = make_grid(4.0, 64);
    auto f = make_sampled(g);
    CHECK_THROWS_AS(resample(f, make_grid(8.0, 64)), DomainError);
}
