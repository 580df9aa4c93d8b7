#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "migwave/errors.hpp"

namespace migwave {

// Uniform two-sided grid with the interface eta* as a shared node.
// Left nodes:  y_left(i)  = eta* - (n_left - i) h,  i = 0..n_left
// Right nodes: y_right(j) = eta* + j h,             j = 0..n_right
struct Grid {
    double h = 0;
    int n_left = 0, n_right = 0;
    double eta_star = 0;

    static Grid make(double h, double L_left, double L_right, double eta_star) {
        if (!(h > 0.0)) throw ValidationError("Grid: h must be positive");
        Grid g;
        g.h = h;
        g.n_left = static_cast<int>(std::lround(L_left / h));
        g.n_right = static_cast<int>(std::lround(L_right / h));
        g.eta_star = eta_star;
        if (g.n_left < 16 || g.n_right < 16)
            throw ValidationError("Grid: need at least 16 cells per side");
        return g;
    }

    double L_left() const { return n_left * h; }
    double L_right() const { return n_right * h; }
    double y_left(int i) const { return eta_star - (n_left - i) * h; }
    double y_right(int j) const { return eta_star + j * h; }
};

// Samples of a function defined separately on the two half-lines.
// Both arrays include the shared eta* node (left.back(), right.front());
// state fields keep the two copies equal, derivative fields may differ.
struct HalfLinePair {
    std::vector<double> left, right;

    static HalfLinePair zeros(const Grid& g) {
        HalfLinePair p;
        p.left.assign(g.n_left + 1, 0.0);
        p.right.assign(g.n_right + 1, 0.0);
        return p;
    }

    static HalfLinePair sample(const Grid& g, const std::function<double(double)>& f_left,
                               const std::function<double(double)>& f_right) {
        HalfLinePair p;
        p.left.resize(g.n_left + 1);
        p.right.resize(g.n_right + 1);
        for (int i = 0; i <= g.n_left; ++i) p.left[i] = f_left(g.y_left(i));
        for (int j = 0; j <= g.n_right; ++j) p.right[j] = f_right(g.y_right(j));
        return p;
    }

    bool matches(const Grid& g) const {
        return left.size() == static_cast<size_t>(g.n_left + 1) &&
               right.size() == static_cast<size_t>(g.n_right + 1);
    }

    double at_interface() const { return left.back(); }
};

// Linear interpolation on one side; zero outside the sampled range.
inline double interp_left(const Grid& g, const std::vector<double>& v, double y) {
    const double t = (y - g.y_left(0)) / g.h;
    if (t < 0.0 || t > g.n_left) return 0.0;
    const int i = std::min(static_cast<int>(t), g.n_left - 1);
    const double s = t - i;
    return v[i] * (1.0 - s) + v[i + 1] * s;
}

inline double interp_right(const Grid& g, const std::vector<double>& v, double y) {
    const double t = (y - g.eta_star) / g.h;
    if (t < 0.0 || t > g.n_right) return 0.0;
    const int i = std::min(static_cast<int>(t), g.n_right - 1);
    const double s = t - i;
    return v[i] * (1.0 - s) + v[i + 1] * s;
}

} // namespace migwave
