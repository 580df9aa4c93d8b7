#pragma once

// Test-only oracle: second-order finite-difference discretization of the
// resolvent equation (lambda - L) w = f with the two interface rows, solved
// by complex Thomas elimination per side plus a scalar Schur closure for the
// shared interface value. Independent of the production integral formulas.

#include <complex>
#include <vector>

#include "migwave/grid.hpp"
#include "migwave/params.hpp"
#include "migwave/resolvent.hpp"

namespace migwave::testing {

using Complex = std::complex<double>;

inline std::vector<Complex> thomas(std::vector<Complex> sub, std::vector<Complex> diag,
                                   std::vector<Complex> sup, std::vector<Complex> rhs) {
    const size_t n = diag.size();
    for (size_t i = 1; i < n; ++i) {
        const Complex m = sub[i] / diag[i - 1];
        diag[i] -= m * sup[i - 1];
        rhs[i] -= m * rhs[i - 1];
    }
    std::vector<Complex> x(n);
    x[n - 1] = rhs[n - 1] / diag[n - 1];
    for (size_t i = n - 1; i-- > 0;) x[i] = (rhs[i] - sup[i] * x[i + 1]) / diag[i];
    return x;
}

struct SideSolve {
    std::vector<Complex> particular;  // solution with interface value 0
    std::vector<Complex> response;    // solution of the homogeneous system with interface value 1
};

inline SideSolve solve_side(Complex lambda, double s2, double drift, double h, int n,
                            const std::vector<double>& f, bool interface_at_high_end) {
    // interior unknowns 1..n-1; Dirichlet zero at the outer end, parametrized
    // value at the interface end
    const double a = s2 / (2.0 * h * h);
    const double bb = drift / (2.0 * h);
    const int m = n - 1;
    std::vector<Complex> sub(m, -a + bb), diag(m, lambda + 2.0 * a), sup(m, -a - bb);
    std::vector<Complex> rhs_p(m), rhs_h(m, Complex{});
    for (int i = 1; i <= m; ++i) rhs_p[i - 1] = f[i];
    if (interface_at_high_end) {
        rhs_h[m - 1] = a + bb;  // coupling of w_{n-1} row to w_n = W
    } else {
        rhs_h[0] = a - bb;  // coupling of w_1 row to w_0 = W
    }
    SideSolve s;
    s.particular = thomas(sub, diag, sup, rhs_p);
    s.response = thomas(sub, diag, sup, rhs_h);
    return s;
}

// Returns the full discrete solution on both sides (arrays include the
// interface node and the zeroed outer nodes).
inline ComplexHalfLinePair direct_resolvent_solve(const DerivedParams& d, const Grid& g,
                                                  Complex lambda, const HalfLinePair& f,
                                                  double a_datum = 0.0) {
    const double h = g.h;
    const int nl = g.n_left, nr = g.n_right;
    auto left = solve_side(lambda, d.sigma_L2(), d.params.delta - 0.5 * d.sigma_L2(), h, nl,
                           f.left, true);
    auto right = solve_side(lambda, d.sigma_H2(), d.params.delta - 0.5 * d.sigma_H2(), h, nr,
                            f.right, false);

    // interface row with one-sided 3-point derivatives:
    //   (-3W + 4 w^R_1 - w^R_2)/(2h) - (3W - 4 w^L_{nl-1} + w^L_{nl-2})/(2h) - A W = a
    auto lval = [&](const std::vector<Complex>& v, int i) { return v[i - 1]; };  // i in 1..nl-1
    auto rval = [&](const std::vector<Complex>& v, int j) { return v[j - 1]; };  // j in 1..nr-1
    const Complex alpha =
        (-3.0 + 4.0 * rval(right.response, 1) - rval(right.response, 2)) / (2.0 * h) -
        (3.0 - 4.0 * lval(left.response, nl - 1) + lval(left.response, nl - 2)) / (2.0 * h) -
        d.A;
    const Complex beta = a_datum -
                         (4.0 * rval(right.particular, 1) - rval(right.particular, 2)) / (2.0 * h) -
                         (4.0 * lval(left.particular, nl - 1) - lval(left.particular, nl - 2)) /
                             (2.0 * h);
    const Complex W = beta / alpha;

    ComplexHalfLinePair w = ComplexHalfLinePair::zeros(g);
    for (int i = 1; i <= nl - 1; ++i) w.left[i] = left.particular[i - 1] + W * left.response[i - 1];
    w.left[nl] = W;
    w.right[0] = W;
    for (int j = 1; j <= nr - 1; ++j)
        w.right[j] = right.particular[j - 1] + W * right.response[j - 1];
    return w;
}

} // namespace migwave::testing
