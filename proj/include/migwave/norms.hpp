#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "migwave/grid.hpp"
#include "migwave/params.hpp"

namespace migwave {

namespace detail {

// Second-order first derivative: centered inside, 3-point one-sided at ends.
inline std::vector<double> fd1(const std::vector<double>& v, double h) {
    const int n = static_cast<int>(v.size()) - 1;
    std::vector<double> d(n + 1);
    d[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
    for (int i = 1; i < n; ++i) d[i] = (v[i + 1] - v[i - 1]) / (2.0 * h);
    d[n] = (3.0 * v[n] - 4.0 * v[n - 1] + v[n - 2]) / (2.0 * h);
    return d;
}

// Second-order second derivative: centered inside, 4-point one-sided at ends.
inline std::vector<double> fd2(const std::vector<double>& v, double h) {
    const int n = static_cast<int>(v.size()) - 1;
    const double h2 = h * h;
    std::vector<double> d(n + 1);
    d[0] = (2.0 * v[0] - 5.0 * v[1] + 4.0 * v[2] - v[3]) / h2;
    for (int i = 1; i < n; ++i) d[i] = (v[i - 1] - 2.0 * v[i] + v[i + 1]) / h2;
    d[n] = (2.0 * v[n] - 5.0 * v[n - 1] + 4.0 * v[n - 2] - v[n - 3]) / h2;
    return d;
}

} // namespace detail

inline HalfLinePair pair_fd1(const Grid& g, const HalfLinePair& p) {
    return {detail::fd1(p.left, g.h), detail::fd1(p.right, g.h)};
}

inline HalfLinePair pair_fd2(const Grid& g, const HalfLinePair& p) {
    return {detail::fd2(p.left, g.h), detail::fd2(p.right, g.h)};
}

// Weighted quotients (w1/q_L, w2/q_H), the "flattened" view of the pair.
inline HalfLinePair weighted_quotient(const Grid& g, const HalfLinePair& p,
                                      const DerivedParams& d) {
    HalfLinePair z = p;
    for (int i = 0; i <= g.n_left; ++i) z.left[i] /= weight(d, Side::Left, g.y_left(i));
    for (int j = 0; j <= g.n_right; ++j) z.right[j] /= weight(d, Side::Right, g.y_right(j));
    return z;
}

// sup |w1/q_L| + sup |w2/q_H| over grid nodes
inline double x_norm(const Grid& g, const HalfLinePair& p, const DerivedParams& d) {
    if (!p.matches(g)) throw ValidationError("x_norm: pair does not match the grid");
    double sl = 0.0, sr = 0.0;
    for (int i = 0; i <= g.n_left; ++i)
        sl = std::max(sl, std::fabs(p.left[i] / weight(d, Side::Left, g.y_left(i))));
    for (int j = 0; j <= g.n_right; ++j)
        sr = std::max(sr, std::fabs(p.right[j] / weight(d, Side::Right, g.y_right(j))));
    return sl + sr;
}

// x-norm of (w, D_y w, D_yy w) with one-sided stencils at eta* and the ends
inline double x2_norm(const Grid& g, const HalfLinePair& p, const DerivedParams& d) {
    if (static_cast<int>(p.left.size()) < 5 || static_cast<int>(p.right.size()) < 5)
        throw ValidationError("x2_norm: need at least 5 nodes per side");
    return x_norm(g, p, d) + x_norm(g, pair_fd1(g, p), d) + x_norm(g, pair_fd2(g, p), d);
}

// Classical C^2_b norm of the weighted quotients, differentiated as sampled data.
inline double c2b_norm(const Grid& g, const HalfLinePair& p, const DerivedParams& d) {
    const HalfLinePair z = weighted_quotient(g, p, d);
    auto sup = [](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s = std::max(s, std::fabs(x));
        return s;
    };
    const HalfLinePair dz = pair_fd1(g, z), dzz = pair_fd2(g, z);
    return sup(z.left) + sup(dz.left) + sup(dzz.left) + sup(z.right) + sup(dz.right) +
           sup(dzz.right);
}

// Norm-equivalence constants assembled from the two displayed Leibniz
// expansions: per side max(1 + 2 beta, 1 + beta + beta^2), beta = |c_J - 1|/2.
inline double equivalence_constant(const DerivedParams& d) {
    double c = 1.0;
    for (double cj : {d.c_L, d.c_H}) {
        const double beta = 0.5 * std::fabs(cj - 1.0);
        c = std::max({c, 1.0 + 2.0 * beta, 1.0 + beta + beta * beta});
    }
    return c;
}

struct EquivalenceReport {
    double ratio = 1.0;  // x2_norm / c2b_norm; 0/0 reported as 1 by convention
    double lo = 0.0, hi = 0.0;
    bool within = false;
    double x2 = 0.0, c2b = 0.0;
};

inline EquivalenceReport equivalence_check(const Grid& g, const HalfLinePair& p,
                                           const DerivedParams& d) {
    EquivalenceReport r;
    r.x2 = x2_norm(g, p, d);
    r.c2b = c2b_norm(g, p, d);
    const double C = equivalence_constant(d);
    r.lo = 1.0 / C;
    r.hi = C;
    r.ratio = (r.x2 == 0.0 && r.c2b == 0.0) ? 1.0 : r.x2 / r.c2b;
    r.within = r.ratio >= r.lo * (1.0 - 1e-12) && r.ratio <= r.hi * (1.0 + 1e-12);
    return r;
}

// Discrete alpha-Hoelder seminorm of the weighted quotients over node pairs
// at distance <= max_sep (the estimates split at distance 1).
inline double holder_seminorm(const Grid& g, const HalfLinePair& p, const DerivedParams& d,
                              double alpha = 0.5, double max_sep = 1.0) {
    const HalfLinePair z = weighted_quotient(g, p, d);
    const int k_max = std::max(1, static_cast<int>(max_sep / g.h));
    auto side_semi = [&](const std::vector<double>& v) {
        double s = 0.0;
        const int n = static_cast<int>(v.size());
        for (int i = 0; i < n; ++i)
            for (int k = 1; k <= k_max && i + k < n; ++k)
                s = std::max(s, std::fabs(v[i + k] - v[i]) / std::pow(k * g.h, alpha));
        return s;
    };
    return side_semi(z.left) + side_semi(z.right);
}

struct NormReport {
    double x_norm = 0;
    double x2_norm = 0;
    double c2b_norm = 0;
    double holder_alpha = 0;  // seminorm value at the exponent below
    double alpha = 0.5;
};

inline NormReport compute_norm_report(const Grid& g, const HalfLinePair& p,
                                      const DerivedParams& d, double alpha = 0.5) {
    NormReport r;
    r.x_norm = x_norm(g, p, d);
    r.x2_norm = x2_norm(g, p, d);
    r.c2b_norm = c2b_norm(g, p, d);
    r.alpha = alpha;
    r.holder_alpha = holder_seminorm(g, p, d, alpha);
    return r;
}

// ---- exponential-rate fitting ---------------------------------------------

struct DecayFit {
    double rate = 0;       // -slope of the ln-linear fit
    double intercept = 0;  // ln value at t = 0
    double r_squared = 1;
    double t_start = 0, t_end = 0;
    int n_samples = 0;
};

inline DecayFit fit_decay(const std::vector<double>& t, const std::vector<double>& value,
                          double window_start, double window_end) {
    if (t.size() != value.size()) throw ValidationError("fit_decay: size mismatch");
    std::vector<double> xs, ys;
    for (size_t i = 0; i < t.size(); ++i) {
        if (t[i] < window_start || t[i] > window_end) continue;
        if (!(value[i] > 0.0))
            throw ValidationError("fit_decay: non-positive value in window; clip the floor first");
        xs.push_back(t[i]);
        ys.push_back(std::log(value[i]));
    }
    if (xs.size() < 10) throw ValidationError("fit_decay: need at least 10 samples in the window");
    const size_t n = xs.size();
    double mx = 0, my = 0;
    for (size_t i = 0; i < n; ++i) { mx += xs[i]; my += ys[i]; }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0, syy = 0;
    for (size_t i = 0; i < n; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    DecayFit f;
    const double slope = sxy / sxx;
    f.rate = -slope;
    f.intercept = my - slope * mx;
    double ss_res = 0;
    for (size_t i = 0; i < n; ++i) {
        const double e = ys[i] - (my + slope * (xs[i] - mx));
        ss_res += e * e;
    }
    // variance at the level of accumulated summation rounding means a flat
    // series (the mean of n equal values drifts by O(n eps), so syy ~ n^3 eps^2)
    const double eps = std::numeric_limits<double>::epsilon();
    const double flat = 64.0 * static_cast<double>(n) * n * n * eps * eps * (1.0 + my * my);
    f.r_squared = syy > flat ? std::max(0.0, 1.0 - ss_res / syy) : 1.0;
    f.t_start = xs.front();
    f.t_end = xs.back();
    f.n_samples = static_cast<int>(n);
    return f;
}

} // namespace migwave
