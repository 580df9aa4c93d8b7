#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "migwave/wave.hpp"
#include "support/random_params.hpp"

using namespace migwave;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("wave: P0 interface values") {
    auto w = build_wave(derive(preset_P0()));
    const double eta = w.derived.eta_star;  // zero to machine precision
    CHECK_THAT(w.value(0.0), WithinRel(0.8, 1e-14));
    CHECK_THAT(w.prime(eta, Side::Left), WithinRel(0.3, 1e-14));
    CHECK_THAT(w.prime(eta, Side::Right), WithinRel(0.3, 1e-14));
    CHECK_THAT(w.k_prime_at_interface, WithinRel(0.3, 1e-14));
    CHECK_THAT(w.k_second_jump, WithinRel(-0.5625, 1e-13));
    CHECK_THAT(w.second(eta, Side::Left), WithinRel(0.1125, 1e-13));
    CHECK_THAT(w.second(eta, Side::Right), WithinRel(-0.45, 1e-13));
}

TEST_CASE("wave: C1 matching and interface condition across the domain") {
    std::mt19937_64 rng(101);
    for (int k = 0; k < 200; ++k) {
        auto d = derive(migwave::testing::random_admissible(rng));
        auto w = build_wave(d);
        const double eta = d.eta_star;
        // value continuity: evaluate the right branch one ulp past the interface
        const double right_lim = w.value(std::nextafter(eta, eta + 1.0));
        CHECK_THAT(w.value(eta) - right_lim, WithinAbs(0.0, 1e-13));
        CHECK_THAT(w.prime(eta, Side::Left) - w.prime(eta, Side::Right), WithinAbs(0.0, 1e-13));
        CHECK_THAT(w.value(eta), WithinRel(d.params.gamma * std::exp(eta), 1e-13));
        // monotone on both sides
        CHECK(w.prime(eta - 1.3, Side::Left) > 0.0);
        CHECK(w.prime(eta + 2.1, Side::Right) > 0.0);
        // second-derivative jump against the independent one-sided formulas
        const double jump = w.second(eta, Side::Right) - w.second(eta, Side::Left);
        CHECK_THAT(w.k_second_jump, WithinRel(jump, 1e-12));
    }
}

TEST_CASE("wave: far-field limits") {
    auto w = build_wave(derive(preset_P0()));
    CHECK(std::fabs(w.value(-60.0)) < 1e-9);
    CHECK(std::fabs(w.value(60.0) - 1.0) < 1e-9);
}

TEST_CASE("wave: centered differences reproduce K' at second order") {
    auto w = build_wave(derive(preset_P0()));
    for (double y : {-2.0, 1.5}) {
        double prev_err = 0.0;
        std::vector<double> errs;
        for (double h : {0.02, 0.01, 0.005}) {
            const double fd = (w.value(y + h) - w.value(y - h)) / (2.0 * h);
            errs.push_back(std::fabs(fd - w.prime(y)));
        }
        const double order1 = std::log2(errs[0] / errs[1]);
        const double order2 = std::log2(errs[1] / errs[2]);
        CHECK(order1 > 1.9);
        CHECK(order1 < 2.1);
        CHECK(order2 > 1.9);
        CHECK(order2 < 2.1);
        (void)prev_err;
    }
}

TEST_CASE("wave: ode residual vanishes off the interface") {
    auto w = build_wave(derive(preset_P0()));
    CHECK(std::fabs(ode_residual(w, -1.0)) < 1e-12);
    CHECK(std::fabs(ode_residual(w, 2.0)) < 1e-12);
    CHECK(std::fabs(ode_residual_one_sided(w, 0.0, Side::Left)) < 1e-12);
    CHECK(std::fabs(ode_residual_one_sided(w, 0.0, Side::Right)) < 1e-12);
    CHECK_THROWS_AS(ode_residual(w, 0.0), ValidationError);
}

TEST_CASE("wave: ode residual on random tuples at many sample points") {
    std::mt19937_64 rng(2024);
    for (int k = 0; k < 40; ++k) {
        auto w = build_wave(derive(migwave::testing::random_admissible(rng)));
        const double eta = w.derived.eta_star;
        for (int i = 1; i <= 50; ++i) {
            CHECK(std::fabs(ode_residual(w, eta - 0.37 * i)) < 1e-12);
            CHECK(std::fabs(ode_residual(w, eta + 0.29 * i)) < 1e-12);
        }
    }
}

TEST_CASE("wave: attenuated wave") {
    auto w = build_wave(derive(preset_P0()));
    for (double x : {-3.0, 0.0, 1.7})
        CHECK(attenuated_wave(w, 0.0, x) == w.value(x));
    // t = 10, x = 0.2: x + ct = 0.2 - 0.2 = 0, so e^{-0.3} K(0)
    CHECK_THAT(attenuated_wave(w, 10.0, 0.2), WithinRel(0.592654576545374293, 1e-13));
    // far right: K -> 1
    CHECK_THAT(attenuated_wave(w, 2.0, 80.0), WithinRel(std::exp(-0.06), 1e-10));
    CHECK_THROWS_AS(attenuated_wave(w, -1.0, 0.0), ValidationError);
}
