#pragma once

#include <atomic>
#include <complex>
#include <future>
#include <string>
#include <vector>

#include "migwave/dispersion.hpp"
#include "migwave/winding.hpp"

namespace migwave {

enum class StabilityVerdict { SpectrallyStable, PotentiallyUnstable };

inline const char* to_string(StabilityVerdict v) {
    return v == StabilityVerdict::SpectrallyStable ? "spectrally-stable"
                                                   : "potentially-unstable";
}

struct SpectrumReport {
    double essential_edge = 0;                       // max branch point
    std::vector<std::pair<Rect, int>> winding_counts;
    std::vector<Complex> roots;                      // refined, |D| < root_tol each
    std::string condition_verdict = "none";          // none | system-one | system-two | both
    double c_HL_bound = 0;
    double delta_disc = 0;                           // printed-convention discriminant
    double delta_quarter_disc = 0;                   // standard quarter-discriminant
    StabilityVerdict verdict = StabilityVerdict::SpectrallyStable;
    ConditionSystemOne system_one;
    ConditionSystemTwo system_two;
    double root_tol = 1e-10;
};

// Winding count plus refined roots of D over one rectangle.
// The rectangle must stay right of the essential spectrum (branch cuts).
inline SpectrumReport root_search(const DerivedParams& d, const Rect& rect,
                                  const WindingOptions& opt = {}, double root_tol = 1e-10) {
    SpectrumReport rep;
    rep.essential_edge = d.spectrum_edge;
    rep.root_tol = root_tol;
    if (rect.degenerate()) {
        rep.winding_counts.push_back({rect, 0});
        return rep;
    }
    if (!(rect.re_min > d.spectrum_edge))
        throw ValidationError("root_search: rectangle must satisfy Re(lambda) > spectrum_edge");
    AnalyticFn f = [&d](Complex z) { return dispersion(d, z); };
    AnalyticFn fp = [&d](Complex z) { return dispersion_derivative(d, z); };
    const int count = winding_number(f, rect, opt);
    rep.winding_counts.push_back({rect, count});
    if (count > 0) rep.roots = locate_zeros(f, fp, rect, count, root_tol, opt);
    return rep;
}

// Verdict over the whole right half-plane region of interest: the two
// polynomial condition systems decide, and an argument-principle pass over
// [re_min, R] x [-R, R] confirms.
inline SpectrumReport classify(const DerivedParams& d, double R = 50.0,
                               Strictness strict = Strictness::AsPrinted,
                               bool confirm_with_winding = true) {
    SpectrumReport rep;
    rep.essential_edge = d.spectrum_edge;
    rep.system_one = condition_system_one(d);
    rep.system_two = condition_system_two(d, strict);
    rep.c_HL_bound = c_HL_bound(d);
    rep.delta_disc = rep.system_two.delta;
    rep.delta_quarter_disc = rep.system_two.delta_quarter_disc;
    const bool one = rep.system_one.overall, two = rep.system_two.overall;
    rep.condition_verdict = one && two ? "both" : one ? "system-one" : two ? "system-two" : "none";
    rep.verdict = (one || two) ? StabilityVerdict::PotentiallyUnstable
                               : StabilityVerdict::SpectrallyStable;
    if (confirm_with_winding) {
        Rect rect;
        rect.re_min = d.spectrum_edge < 0.0 ? 0.5 * d.spectrum_edge : 1e-12;
        rect.re_max = R;
        rect.im_min = -R;
        rect.im_max = R;
        AnalyticFn f = [&d](Complex z) { return dispersion(d, z); };
        AnalyticFn fp = [&d](Complex z) { return dispersion_derivative(d, z); };
        const double floor = d.spectrum_edge < 0.0 ? 0.75 * d.spectrum_edge : rect.re_min;
        const int count = winding_number_jittered(f, rect, {}, 4, floor);
        rep.winding_counts.push_back({rect, count});
        if (count > 0) rep.roots = locate_zeros(f, fp, rect, count, rep.root_tol);
    }
    return rep;
}

// ---- parameter sweeps ----------------------------------------------------

struct SweepRow {
    double c_L = 0, c_H = 0, sigma_H = 0, sigma_L = 0, delta = 0;
    ConditionSystemOne s1;
    ConditionSystemTwo s2;
    double c_HL_bound = 0;
    int winding = -1;  // -1: confirmation not run / not available
    StabilityVerdict verdict = StabilityVerdict::SpectrallyStable;
    std::string error;  // nonempty if the confirmation pass failed
};

struct SweepSpec {
    enum class Mode { RatioGrid, SigmaGrid };
    Mode mode = Mode::RatioGrid;
    // RatioGrid: axes are (c_L, c_H) at fixed delta
    double c_L_min = 0.1, c_L_max = 0.9;
    int n_c_L = 2;
    double c_H_min = 1.1, c_H_max = 3.0;
    int n_c_H = 2;
    double delta = 0.05;
    // SigmaGrid: axes are (sigma_H, sigma_L, delta)
    double sigma_H_min = 0.15, sigma_H_max = 0.3;
    int n_sigma_H = 2;
    double sigma_L_min = 0.3, sigma_L_max = 0.5;
    int n_sigma_L = 2;
    double delta_min = 0.03, delta_max = 0.07;
    int n_delta = 2;

    double gamma = 0.5, r = 0.03;  // carried along; the systems do not use them
    bool confirm_winding = true;
    double R = 50.0;
    Strictness strict = Strictness::AsPrinted;
    int threads = 1;
};

namespace detail {

inline double lin(double lo, double hi, int i, int n) {
    return n <= 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / (n - 1);
}

inline SweepRow sweep_point(const SweepSpec& spec, const FinancialParams& p) {
    SweepRow row;
    const DerivedParams d = derive_unchecked(p);
    row.c_L = d.c_L;
    row.c_H = d.c_H;
    row.sigma_H = p.sigma_H;
    row.sigma_L = p.sigma_L;
    row.delta = p.delta;
    row.s1 = condition_system_one(d);
    row.s2 = condition_system_two(d, spec.strict);
    row.c_HL_bound = c_HL_bound(d);
    row.verdict = (row.s1.overall || row.s2.overall) ? StabilityVerdict::PotentiallyUnstable
                                                     : StabilityVerdict::SpectrallyStable;
    if (spec.confirm_winding) {
        try {
            Rect rect{d.spectrum_edge < 0.0 ? 0.5 * d.spectrum_edge : 1e-12, spec.R, -spec.R,
                      spec.R};
            AnalyticFn f = [&d](Complex z) { return dispersion(d, z); };
            const double floor = d.spectrum_edge < 0.0 ? 0.75 * d.spectrum_edge : rect.re_min;
            row.winding = winding_number_jittered(f, rect, {}, 4, floor);
        } catch (const std::exception& e) {
            row.winding = -1;
            row.error = e.what();
        }
    }
    return row;
}

} // namespace detail

// Deterministic row-major table; grid points are independent and may be
// evaluated concurrently, rows are merged back in grid order.
inline std::vector<SweepRow> sweep(const SweepSpec& spec) {
    std::vector<FinancialParams> points;
    if (spec.mode == SweepSpec::Mode::RatioGrid) {
        if (spec.n_c_L < 2 || spec.n_c_H < 2)
            throw ValidationError("sweep: resolution must be >= 2 per axis");
        for (int i = 0; i < spec.n_c_L; ++i)
            for (int j = 0; j < spec.n_c_H; ++j)
                points.push_back(params_from_ratios(
                    spec.delta, spec.gamma, spec.r,
                    detail::lin(spec.c_H_min, spec.c_H_max, j, spec.n_c_H),
                    detail::lin(spec.c_L_min, spec.c_L_max, i, spec.n_c_L)));
    } else {
        if (spec.n_sigma_H < 2 || spec.n_sigma_L < 2 || spec.n_delta < 2)
            throw ValidationError("sweep: resolution must be >= 2 per axis");
        for (int i = 0; i < spec.n_sigma_H; ++i)
            for (int j = 0; j < spec.n_sigma_L; ++j)
                for (int k = 0; k < spec.n_delta; ++k) {
                    FinancialParams p;
                    p.sigma_H = detail::lin(spec.sigma_H_min, spec.sigma_H_max, i, spec.n_sigma_H);
                    p.sigma_L = detail::lin(spec.sigma_L_min, spec.sigma_L_max, j, spec.n_sigma_L);
                    p.delta = detail::lin(spec.delta_min, spec.delta_max, k, spec.n_delta);
                    p.gamma = spec.gamma;
                    p.r = spec.r;
                    points.push_back(p);
                }
    }

    std::vector<SweepRow> rows(points.size());
    const int threads = std::max(1, spec.threads);
    if (threads == 1) {
        for (size_t i = 0; i < points.size(); ++i) rows[i] = detail::sweep_point(spec, points[i]);
        return rows;
    }
    std::vector<std::future<void>> futs;
    std::atomic<size_t> next{0};
    for (int t = 0; t < threads; ++t)
        futs.push_back(std::async(std::launch::async, [&]() {
            for (;;) {
                const size_t i = next.fetch_add(1);
                if (i >= points.size()) return;
                rows[i] = detail::sweep_point(spec, points[i]);
            }
        }));
    for (auto& f : futs) f.get();
    return rows;
}

} // namespace migwave
