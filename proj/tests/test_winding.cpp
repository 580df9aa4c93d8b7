#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>

#include "migwave/spectrum.hpp"
#include "support/random_params.hpp"

using namespace migwave;

namespace {

// synthetic oracle: cubic with known zeros
const std::complex<double> Z1{0.7, 0.3}, Z2{-1.2, 1.1}, Z3{2.0, -1.6};

std::complex<double> cubic(std::complex<double> z) {
    return (z - Z1) * (z - Z2) * (z - Z3);
}
std::complex<double> cubic_prime(std::complex<double> z) {
    return (z - Z2) * (z - Z3) + (z - Z1) * (z - Z3) + (z - Z1) * (z - Z2);
}

int expected_count(const Rect& r) {
    int n = 0;
    for (auto z : {Z1, Z2, Z3})
        if (z.real() > r.re_min && z.real() < r.re_max && z.imag() > r.im_min &&
            z.imag() < r.im_max)
            ++n;
    return n;
}

} // namespace

TEST_CASE("winding: exact zero counts for a known cubic over random rectangles") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(-4.0, 4.0), w(0.3, 5.0);
    int nonzero_seen = 0;
    for (int k = 0; k < 50; ++k) {
        Rect r;
        r.re_min = u(rng);
        r.re_max = r.re_min + w(rng);
        r.im_min = u(rng);
        r.im_max = r.im_min + w(rng);
        // keep zeros off the boundary for a well-posed count
        bool boundary = false;
        for (auto z : {Z1, Z2, Z3})
            if (std::fabs(z.real() - r.re_min) < 0.05 || std::fabs(z.real() - r.re_max) < 0.05 ||
                std::fabs(z.imag() - r.im_min) < 0.05 || std::fabs(z.imag() - r.im_max) < 0.05)
                boundary = true;
        if (boundary) { --k; continue; }
        const int expected = expected_count(r);
        CHECK(winding_number(cubic, r) == expected);
        if (expected > 0) ++nonzero_seen;
    }
    CHECK(nonzero_seen > 5);
}

TEST_CASE("winding: degenerate rectangle counts zero") {
    Rect r{1.0, 1.0, -1.0, 1.0};
    CHECK(winding_number(cubic, r) == 0);
}

TEST_CASE("winding: contour through a zero raises the jitter error") {
    Rect r{Z1.real(), Z1.real() + 2.0, Z1.imag() - 1.0, Z1.imag() + 1.0};  // zero on left edge
    CHECK_THROWS_AS(winding_number(cubic, r), ContourNearZeroError);
    // and the jittered variant recovers
    CHECK(winding_number_jittered(cubic, r) >= 1);
}

TEST_CASE("locate_zeros: refines all cubic roots to tolerance") {
    Rect r{-3.0, 3.0, -2.5, 2.5};
    const int count = winding_number(cubic, r);
    REQUIRE(count == 3);
    auto roots = locate_zeros(cubic, cubic_prime, r, count, 1e-12);
    REQUIRE(roots.size() == 3);
    for (const auto& z : roots) {
        CHECK(std::abs(cubic(z)) < 1e-12);
        const bool near = std::abs(z - Z1) < 1e-6 || std::abs(z - Z2) < 1e-6 ||
                          std::abs(z - Z3) < 1e-6;
        CHECK(near);
    }
}

TEST_CASE("root_search: no dispersion zeros in the right half-plane at P0") {
    auto d = derive(preset_P0());
    Rect r{0.0, 5.0, -5.0, 5.0};
    auto rep = root_search(d, r);
    REQUIRE(rep.winding_counts.size() == 1);
    CHECK(rep.winding_counts[0].second == 0);
    CHECK(rep.roots.empty());

    // independent oracle: dense scan of |D| over the rectangle stays positive
    double min_abs = 1e300;
    for (int i = 0; i <= 60; ++i)
        for (int j = 0; j <= 60; ++j) {
            const Complex lam(5.0 * i / 60.0, -5.0 + 10.0 * j / 60.0);
            min_abs = std::min(min_abs, std::abs(dispersion(d, lam)));
        }
    CHECK(min_abs > 1e-2);
}

TEST_CASE("root_search: rejects rectangles that cross the essential spectrum") {
    auto d = derive(preset_P0());
    Rect r{-1.0, 5.0, -5.0, 5.0};  // re_min left of spectrum_edge
    CHECK_THROWS_AS(root_search(d, r), ValidationError);
    Rect degenerate{1.0, 1.0, -5.0, 5.0};
    CHECK(root_search(d, degenerate).winding_counts[0].second == 0);
}

TEST_CASE("root_search: winding zero right of the zalone bound") {
    std::mt19937_64 rng(4321);
    for (int k = 0; k < 15; ++k) {
        auto d = derive(migwave::testing::random_admissible(rng));
        const double lo = std::max(c_HL_bound(d), 0.0) + 0.5;
        Rect r{lo, lo + 30.0, -30.0, 30.0};
        auto rep = root_search(d, r);
        CHECK(rep.winding_counts[0].second == 0);
    }
}

TEST_CASE("classify: P0 spectrally stable with winding confirmation") {
    auto rep = classify(derive(preset_P0()));
    CHECK(rep.verdict == StabilityVerdict::SpectrallyStable);
    CHECK(rep.condition_verdict == "none");
    REQUIRE_FALSE(rep.winding_counts.empty());
    CHECK(rep.winding_counts[0].second == 0);
}

TEST_CASE("classify: any admissible tuple is spectrally stable") {
    std::mt19937_64 rng(606);
    for (int k = 0; k < 25; ++k) {
        auto d = derive(migwave::testing::random_admissible(rng));
        auto rep = classify(d, 50.0, Strictness::AsPrinted, /*confirm=*/k % 5 == 0);
        CHECK(rep.verdict == StabilityVerdict::SpectrallyStable);
    }
}

TEST_CASE("classify: c_L = 2 boundary ties are decided by the remaining conditions") {
    auto d = derive_unchecked(params_from_ratios(0.05, 0.8, 0.03, 2.5, 2.0));
    auto s1 = condition_system_one(d);
    // c_L round-trips through sigma_L, so the tie sits within an ulp of zero
    CHECK(std::fabs(s1.v1) < 1e-12);
    auto rep = classify(d, 20.0, Strictness::AsPrinted, false);
    const bool expectation = s1.overall || condition_system_two(d).overall;
    CHECK((rep.verdict == StabilityVerdict::PotentiallyUnstable) == expectation);

    // exact tie, built without the sigma round-trip
    auto d_exact = d;
    d_exact.c_L = 2.0;
    auto s_exact = condition_system_one(d_exact);
    CHECK(s_exact.v1 == 0.0);
    CHECK(s_exact.pass1);  // holds at equality
}

TEST_CASE("sweep: admissible 2x2 grid is uniformly stable") {
    SweepSpec spec;
    spec.mode = SweepSpec::Mode::RatioGrid;
    spec.c_L_min = 0.3;
    spec.c_L_max = 0.7;
    spec.n_c_L = 2;
    spec.c_H_min = 1.5;
    spec.c_H_max = 2.5;
    spec.n_c_H = 2;
    spec.delta = 0.05;
    auto rows = sweep(spec);
    REQUIRE(rows.size() == 4);
    for (const auto& row : rows) {
        CHECK(row.verdict == StabilityVerdict::SpectrallyStable);
        CHECK(row.winding == 0);
        CHECK(row.error.empty());
    }
}

TEST_CASE("sweep: first-inequality sign follows (c_L-2)(c_H-c_L) across the grid") {
    SweepSpec spec;
    spec.c_L_min = 1.5;
    spec.c_L_max = 3.0;
    spec.n_c_L = 4;
    spec.c_H_min = 1.2;
    spec.c_H_max = 4.0;
    spec.n_c_H = 4;
    spec.confirm_winding = false;
    auto rows = sweep(spec);
    REQUIRE(rows.size() == 16);
    int passing = 0;
    for (const auto& row : rows) {
        CHECK(row.s1.pass1 == ((row.c_L - 2.0) * (row.c_H - row.c_L) >= 0.0));
        if (row.s1.pass1) ++passing;
        // both sign regimes must be represented in the grid
    }
    CHECK(passing > 0);
    CHECK(passing < 16);
}

TEST_CASE("sweep: resolution below 2 is rejected; threads do not change rows") {
    SweepSpec spec;
    spec.n_c_L = 1;
    CHECK_THROWS_AS(sweep(spec), ValidationError);

    SweepSpec s2;
    s2.c_L_min = 0.2;
    s2.c_L_max = 2.6;
    s2.n_c_L = 3;
    s2.c_H_min = 1.2;
    s2.c_H_max = 2.8;
    s2.n_c_H = 3;
    s2.confirm_winding = false;
    auto serial = sweep(s2);
    s2.threads = 4;
    auto parallel = sweep(s2);
    REQUIRE(serial.size() == parallel.size());
    for (size_t i = 0; i < serial.size(); ++i) {
        CHECK(serial[i].c_L == parallel[i].c_L);
        CHECK(serial[i].s2.delta == parallel[i].s2.delta);
        CHECK(serial[i].verdict == parallel[i].verdict);
    }
}
