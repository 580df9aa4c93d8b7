#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <sstream>
#include <vector>

#include "migwave/errors.hpp"

namespace migwave {

struct Rect {
    double re_min = 0, re_max = 0, im_min = 0, im_max = 0;
    bool degenerate() const { return re_min >= re_max || im_min >= im_max; }
    double width() const { return re_max - re_min; }
    double height() const { return im_max - im_min; }
    std::complex<double> center() const {
        return {0.5 * (re_min + re_max), 0.5 * (im_min + im_max)};
    }
    bool contains(std::complex<double> z, double slack = 0.0) const {
        return z.real() >= re_min - slack && z.real() <= re_max + slack &&
               z.imag() >= im_min - slack && z.imag() <= im_max + slack;
    }
};

struct WindingOptions {
    double max_phase_step = std::numbers::pi / 4.0;  // unwrap threshold per sample gap
    double near_zero_tol = 1e-8;                     // |f| below this on the contour aborts
    int max_depth = 48;
};

using AnalyticFn = std::function<std::complex<double>(std::complex<double>)>;

namespace detail {

class PhaseWalker {
public:
    PhaseWalker(const AnalyticFn& f, const WindingOptions& opt, double jitter_scale)
        : f_(f), opt_(opt), jitter_scale_(jitter_scale) {}

    void edge(std::complex<double> a, std::complex<double> b) {
        segment(a, value_at(a), b, value_at(b), 0);
    }

    double total_phase() const { return total_; }

private:
    std::complex<double> value_at(std::complex<double> z) const {
        const std::complex<double> v = f_(z);
        if (std::abs(v) < opt_.near_zero_tol) {
            std::ostringstream os;
            os << "contour passes within tolerance of a zero at lambda = (" << z.real()
               << ", " << z.imag() << "); retry with jittered rectangle bounds";
            throw ContourNearZeroError(os.str(), jitter_scale_);
        }
        return v;
    }

    void segment(std::complex<double> za, std::complex<double> fa,
                 std::complex<double> zb, std::complex<double> fb, int depth) {
        const double dphase = std::arg(fb / fa);
        if (std::fabs(dphase) <= opt_.max_phase_step) {
            // adaptive bisection guarantees each accepted increment is < pi/4,
            // so the branch of arg() is the right one
            total_ += dphase;
            return;
        }
        if (depth >= opt_.max_depth)
            throw ContourNearZeroError(
                "phase refinement exhausted; a zero sits on or next to the contour",
                jitter_scale_);
        const std::complex<double> zm = 0.5 * (za + zb);
        const std::complex<double> fm = value_at(zm);
        segment(za, fa, zm, fm, depth + 1);
        segment(zm, fm, zb, fb, depth + 1);
    }

    const AnalyticFn& f_;
    const WindingOptions& opt_;
    double jitter_scale_;
    double total_ = 0.0;
};

} // namespace detail

// Number of zeros of f inside the rectangle by the argument principle.
inline int winding_number(const AnalyticFn& f, const Rect& r,
                          const WindingOptions& opt = {}) {
    if (r.degenerate()) return 0;
    const double jitter = 1e-3 * std::max(r.width(), r.height());
    detail::PhaseWalker walker(f, opt, jitter);
    const std::complex<double> c00(r.re_min, r.im_min), c10(r.re_max, r.im_min);
    const std::complex<double> c11(r.re_max, r.im_max), c01(r.re_min, r.im_max);
    walker.edge(c00, c10);
    walker.edge(c10, c11);
    walker.edge(c11, c01);
    walker.edge(c01, c00);
    const double turns = walker.total_phase() / (2.0 * std::numbers::pi);
    const long n = std::lround(turns);
    if (std::fabs(turns - static_cast<double>(n)) > 0.2)
        throw RegimeError("winding number did not settle on an integer");
    if (n < 0) throw RegimeError("negative winding count: function is not analytic inside");
    return static_cast<int>(n);
}

// Retry helper: jitters the rectangle outward a few times when the contour
// lands on a zero. re_min never drops below re_min_floor (branch cuts live
// left of it).
inline int winding_number_jittered(const AnalyticFn& f, Rect r, const WindingOptions& opt = {},
                                   int attempts = 4,
                                   double re_min_floor = -std::numeric_limits<double>::infinity()) {
    for (int k = 0;; ++k) {
        try {
            return winding_number(f, r, opt);
        } catch (const ContourNearZeroError& e) {
            if (k + 1 >= attempts) throw;
            const double j = e.suggested_jitter * (k + 1);
            r.re_min = std::max(r.re_min - j, re_min_floor);
            r.re_max += 1.3 * j;
            r.im_min -= 0.7 * j;
            r.im_max += 1.1 * j;
        }
    }
}

// Subdivide-and-polish: locate every zero inside the rectangle.
// `fprime` refines by Newton; refined roots satisfy |f| < tol.
inline std::vector<std::complex<double>> locate_zeros(const AnalyticFn& f,
                                                      const AnalyticFn& fprime,
                                                      const Rect& rect, int expected,
                                                      double tol = 1e-10,
                                                      const WindingOptions& opt = {}) {
    std::vector<std::complex<double>> roots;
    if (expected == 0) return roots;

    std::vector<std::pair<Rect, int>> work{{rect, expected}};
    const double small = 1e-5 * std::max(rect.width(), rect.height());
    while (!work.empty()) {
        auto [r, count] = work.back();
        work.pop_back();
        if (count <= 0) continue;
        const bool tiny = r.width() < small && r.height() < small;
        if (count == 1 || tiny) {
            // Newton from the center; safeguard against leaving the cell badly
            std::complex<double> z = r.center();
            bool converged = false;
            for (int it = 0; it < 100; ++it) {
                const std::complex<double> fz = f(z);
                if (std::abs(fz) < tol) { converged = true; break; }
                const std::complex<double> dz = fz / fprime(z);
                z -= dz;
                if (!r.contains(z, 2.0 * std::max(r.width(), r.height()))) break;
            }
            if (converged) {
                roots.push_back(z);
                continue;
            }
            if (tiny)
                throw RegimeError("zero refinement failed inside a tiny cell");
            // fall through to subdivision
        }
        // split the cell; if a zero sits on the cross, nudge the split point
        // (the parent boundary is already known to be clean)
        int found = -1;
        std::vector<std::pair<Rect, int>> sub;
        for (int attempt = 0; attempt < 6 && found < 0; ++attempt) {
            const double fr = 0.5 + 0.07 * attempt;
            const double rm = r.re_min + fr * (r.re_max - r.re_min);
            const double im = r.im_min + fr * (r.im_max - r.im_min);
            Rect quarters[4] = {{r.re_min, rm, r.im_min, im},
                                {rm, r.re_max, r.im_min, im},
                                {r.re_min, rm, im, r.im_max},
                                {rm, r.re_max, im, r.im_max}};
            try {
                int total = 0;
                sub.clear();
                for (const Rect& q : quarters) {
                    const int wq = winding_number(f, q, opt);
                    total += wq;
                    if (wq > 0) sub.push_back({q, wq});
                }
                found = total;
            } catch (const ContourNearZeroError&) {
                // retry with a shifted cross
            }
        }
        if (found < count)
            throw RegimeError("zeros lost during subdivision (likely on a cell edge)");
        for (auto& s : sub) work.push_back(s);
    }
    // jittered subcells can overlap; collapse duplicates
    std::vector<std::complex<double>> unique;
    for (const auto& z : roots) {
        bool seen = false;
        for (const auto& u : unique)
            if (std::abs(z - u) < 1e-7 * (1.0 + std::abs(u))) { seen = true; break; }
        if (!seen) unique.push_back(z);
    }
    return unique;
}

} // namespace migwave
