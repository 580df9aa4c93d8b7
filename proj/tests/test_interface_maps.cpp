#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "migwave/interface_maps.hpp"
#include "support/random_params.hpp"

using namespace migwave;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("phi: shape on its domain") {
    InterfaceMaps m(derive(preset_P0()));
    CHECK(m.phi(0.0) == 0.0);
    CHECK(m.phi_x0() < 0.0);
    CHECK_THAT(m.x0(), WithinRel(std::log(0.375), 1e-14));
    // strictly increasing on (x0, inf)
    double prev = m.phi(m.x0());
    for (double x = m.x0() + 0.05; x < 4.0; x += 0.05) {
        CHECK(m.phi(x) > prev);
        prev = m.phi(x);
    }
}

TEST_CASE("psi: exact values and the P0 slope") {
    InterfaceMaps m(derive(preset_P0()));
    CHECK(m.psi(0.0) == 0.0);
    CHECK_THAT(m.psi_prime0(), WithinRel(2.0, 1e-12));
    // forward-evaluate Phi(1), invert, expect 1
    const double w1 = m.phi(1.0);
    CHECK_THAT(w1, WithinRel(1.0746254627672362, 1e-13));
    CHECK_THAT(m.psi(w1), WithinAbs(1.0, 1e-12));
}

TEST_CASE("psi: round-trip over the stated domain") {
    std::mt19937_64 rng(42);
    for (auto params : {preset_P0(), preset_P1(), preset_P2()}) {
        InterfaceMaps m(derive(params));
        const double lo = m.phi_x0() + m.margin();
        std::uniform_real_distribution<double> u(0.0, 1.0);
        double worst = 0.0;
        for (int k = 0; k < 1000; ++k) {
            // bias samples toward the singular end
            const double t = u(rng);
            const double w = lo + (2.0 - lo) * t * t * t;
            if (!(w > lo)) continue;
            const double err = std::fabs(m.phi(m.psi(w)) - w);
            worst = std::max(worst, err);
        }
        CHECK(worst < 1e-12);
    }
}

TEST_CASE("psi: out-of-range names Phi(x0)") {
    InterfaceMaps m(derive(preset_P0()));
    try {
        m.psi(m.phi_x0());
        FAIL("expected OutOfRangeError");
    } catch (const OutOfRangeError& e) {
        CHECK(std::string(e.what()).find("Phi(x0)") != std::string::npos);
    }
    CHECK_THROWS_AS(m.psi(m.phi_x0() - 1.0), OutOfRangeError);
}

TEST_CASE("remainder: vanishes to second order at zero") {
    InterfaceMaps m(derive(preset_P0()));
    CHECK(m.remainder(0.0) == 0.0);
    // R'(0) = 0: symmetric difference
    const double h = 1e-5;
    CHECK_THAT((m.remainder(h) - m.remainder(-h)) / (2.0 * h), WithinAbs(0.0, 1e-4));
    // quadratic smallness near the origin (Psi''(0)/2 ~ -3.2 at P0)
    for (double w : {1e-2, 1e-3, 1e-4})
        CHECK(std::fabs(m.remainder(w)) < 4.0 * w * w);
}

TEST_CASE("psi_prime_at agrees with the analytic reciprocal slope") {
    InterfaceMaps m(derive(preset_P0()));
    const double w = m.phi(0.5);
    CHECK_THAT(m.psi_prime_at(w), WithinRel(1.0 / m.phi_prime(0.5), 1e-10));
    const double h = 1e-6;
    const double fd = (m.psi(w + h) - m.psi(w - h)) / (2.0 * h);
    CHECK_THAT(m.psi_prime_at(w), WithinRel(fd, 1e-7));
}

TEST_CASE("lambda: fixed point at zero, monotone, round-trip near zero") {
    for (auto params : {preset_P0(), preset_P1(), preset_P2()}) {
        InterfaceMaps m(derive(params));
        CHECK(m.lambda_map(0.0) == 0.0);
        CHECK(m.lambda_map(0.01) > 0.0);
        CHECK(m.lambda_map(-0.01) < 0.0);
        double worst = 0.0;
        for (int i = -100; i <= 100; ++i) {
            const double x = 0.001 * i;  // |x| <= 0.1
            worst = std::max(worst, std::fabs(m.lambda_inv(m.lambda_map(x)) - x));
        }
        CHECK(worst < 1e-12);
    }
}

TEST_CASE("lambda_inv: rejects values below the basin") {
    InterfaceMaps m(derive(preset_P0()));
    CHECK_THROWS_AS(m.lambda_inv(-50.0), OutOfRangeError);
}

TEST_CASE("maps: constructor rejects parameters without the interface algebra") {
    auto bad = derive_unchecked(params_from_ratios(0.05, 0.8, 0.03, 4.0, 3.0));
    CHECK_THROWS_AS(InterfaceMaps(bad), ValidationError);
}
