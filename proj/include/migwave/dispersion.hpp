#pragma once

#include <cmath>
#include <complex>

#include "migwave/params.hpp"

namespace migwave {

using Complex = std::complex<double>;

enum class Branch { H, L };

// mu^J_+- = -(c_J-1)/2 +- sqrt((c_J-1)^2/4 + 2 lambda / sigma_J^2),
// principal square root throughout.
inline Complex mu(const DerivedParams& d, Branch branch, int sign, Complex lambda) {
    const double cj = branch == Branch::H ? d.c_H : d.c_L;
    const double s2 = branch == Branch::H ? d.sigma_H2() : d.sigma_L2();
    // radicand grouped to cancel exactly at the branch point lambda = -(s2*sq)/8
    const Complex radicand = (s2 * ((cj - 1.0) * (cj - 1.0)) + 8.0 * lambda) / (4.0 * s2);
    const Complex root = std::sqrt(radicand);
    return -0.5 * (cj - 1.0) + (sign >= 0 ? root : -root);
}

// D_lambda = A - mu^H_- + mu^L_+. Its zeros are the point spectrum.
inline Complex dispersion(const DerivedParams& d, Complex lambda) {
    return d.A - mu(d, Branch::H, -1, lambda) + mu(d, Branch::L, +1, lambda);
}

inline Complex dispersion_derivative(const DerivedParams& d, Complex lambda) {
    const double sH2 = d.sigma_H2(), sL2 = d.sigma_L2();
    const Complex rH =
        std::sqrt((sH2 * ((d.c_H - 1.0) * (d.c_H - 1.0)) + 8.0 * lambda) / (4.0 * sH2));
    const Complex rL =
        std::sqrt((sL2 * ((d.c_L - 1.0) * (d.c_L - 1.0)) + 8.0 * lambda) / (4.0 * sL2));
    return 1.0 / (sH2 * rH) + 1.0 / (sL2 * rL);
}

// ---- squared-out dispersion relation ------------------------------------
//
// D_lambda = 0 is squared twice into a real quadratic
//     lam2 * lambda^2 + lam1 * lambda + lam0 = 0.
// The coefficients exist in two routes: transcribed from the long displayed
// polynomials, and re-derived here by squaring programmatically. A mismatch
// beyond 1e-9 relative means a transcription error; verify_coefficient_tables
// checks every pair.

struct SquaredRelation {
    double lam2 = 0, lam1 = 0, lam0 = 0;
    double eval(double re_lambda) const {
        return (lam2 * re_lambda + lam1) * re_lambda + lam0;
    }
    Complex eval(Complex lambda) const { return (lam2 * lambda + lam1) * lambda + lam0; }
};

inline SquaredRelation squared_relation_derived(const DerivedParams& d) {
    const double S = -(d.A + 0.5 * (d.c_H - d.c_L));
    const double AH = 0.25 * (d.c_H - 1.0) * (d.c_H - 1.0);
    const double AL = 0.25 * (d.c_L - 1.0) * (d.c_L - 1.0);
    const double BH = 2.0 / d.sigma_H2();
    const double BL = 2.0 / d.sigma_L2();
    const double T0 = S * S - AH - AL;
    const double T1 = -(BH + BL);
    SquaredRelation q;
    q.lam2 = T1 * T1 - 4.0 * BH * BL;
    q.lam1 = 2.0 * T0 * T1 - 4.0 * (AH * BL + AL * BH);
    q.lam0 = T0 * T0 - 4.0 * AH * AL;
    return q;
}

inline SquaredRelation squared_relation_printed(const DerivedParams& d) {
    const double cH = d.c_H, cL = d.c_L;
    const double sH2 = d.sigma_H2(), sL2 = d.sigma_L2();
    const double bracket2 =
        (1.0 / sL2) * (cH * cH + 2.0 + 3.0 * cH + 2.0 * cH * cH / (cL * cL) - cH * cL -
                       4.0 * cH / cL - 2.0 * cH * cH / cL - cL) +
        (1.0 / sH2) * (cL * cL + 2.0 - 3.0 * cL + 2.0 * cH * cH / (cL * cL) - cH * cL -
                       4.0 * cH / cL + 5.0 * cH - 2.0 * cH * cH / cL);
    const double rhs = -std::pow(cH, 4) / std::pow(cL, 4) - 5.0 * cH * cH / (cL * cL) -
                       9.0 * cH * cH - std::pow(cH, 4) / (cL * cL) +
                       6.0 * std::pow(cH, 3) / cL + 4.0 * std::pow(cH, 3) / std::pow(cL, 3) -
                       9.0 * std::pow(cH, 3) / (cL * cL) +
                       2.0 * std::pow(cH, 4) / std::pow(cL, 3) + 12.0 * cH * cH / cL +
                       4.0 * cH * cL + 2.0 * cH * cH * cL - std::pow(cH, 3) - cH * cL * cL +
                       2.0 * cH / cL - 5.0 * cH;
    const double a = 1.0 / sH2 - 1.0 / sL2;
    SquaredRelation q;
    q.lam2 = 4.0 * a * a;
    q.lam1 = -2.0 * bracket2;
    q.lam0 = -rhs;
    return q;
}

// Inner polynomial whose sign (times c_L - c_H) is the third condition.
inline double venditore_inner(const DerivedParams& d) {
    const double cH = d.c_H, cL = d.c_L;
    const double sH2 = d.sigma_H2(), sL2 = d.sigma_L2();
    return -sH2 * cH * cL * cL + 2.0 * sH2 * cH * cL - 2.0 * sH2 * cH - sH2 * cL * cL +
           2.0 * sH2 * cL + 2.0 * sL2 * cH * cL - 2.0 * sL2 * cH + sL2 * cL * cL * cL -
           3.0 * sL2 * cL * cL + 2.0 * sL2 * cL;
}

// Real-part threshold beyond which the once-squared relation has no solutions.
inline double c_HL_bound_printed(const DerivedParams& d) {
    const double cH = d.c_H, cL = d.c_L;
    const double sH2 = d.sigma_H2(), sL2 = d.sigma_L2();
    return -sH2 * sL2 * (cL - 1.0) *
           (2.0 * cH * cH + cH * cL * cL - 4.0 * cH * cL + cL * cL) /
           (4.0 * (sH2 + sL2) * cL * cL);
}

inline double c_HL_bound(const DerivedParams& d) {
    const double S = -(d.A + 0.5 * (d.c_H - d.c_L));
    const double AH = 0.25 * (d.c_H - 1.0) * (d.c_H - 1.0);
    const double AL = 0.25 * (d.c_L - 1.0) * (d.c_L - 1.0);
    const double T0 = S * S - AH - AL;
    return T0 / (2.0 / d.sigma_H2() + 2.0 / d.sigma_L2());
}

// Discriminant in the printed convention B^2 - 4a^2 C' = lam1^2/4 + lam2*lam0.
// Note this is NOT the standard discriminant of the quadratic (that one is
// lam1^2/4 - lam2*lam0, exposed below); the factored display reproduces the
// printed convention exactly, so both routes of the dual check use it.
inline double delta_from_coefficients(const SquaredRelation& q) {
    return 0.25 * q.lam1 * q.lam1 + q.lam2 * q.lam0;
}

inline double delta_quarter_discriminant(const SquaredRelation& q) {
    return 0.25 * q.lam1 * q.lam1 - q.lam2 * q.lam0;
}

inline double delta_factored_printed(const DerivedParams& d) {
    const double cH = d.c_H, cL = d.c_L;
    const double sH2 = d.sigma_H2(), sL2 = d.sigma_L2();
    const double cL2 = cL * cL, cL3 = cL2 * cL, cL4 = cL3 * cL;
    const double term_H = (1.0 / (sH2 * sH2)) * (cL - 1.0) * (cL - 1.0) *
                          (8.0 * cH * cH + 8.0 * cH * cL2 - 16.0 * cH * cL + cL4 -
                           4.0 * cL3 + 4.0 * cL2);
    const double term_L = (1.0 / (sL2 * sL2)) *
                          (cH * cH * cL4 - 4.0 * cH * cH * cL3 + 12.0 * cH * cH * cL2 -
                           16.0 * cH * cH * cL + 8.0 * cH * cH + 6.0 * cH * cL4 -
                           24.0 * cH * cL3 + 32.0 * cH * cL2 - 16.0 * cH * cL + cL4 -
                           4.0 * cL3 + 4.0 * cL2);
    const double term_X = (2.0 / (sH2 * sL2)) * (cL - 1.0) *
                          (2.0 * cH * cH * cL2 + cH * cL4 - 4.0 * cH * cL2 + cL4 -
                           4.0 * cL3 + 4.0 * cL2);
    return (cH - cL) * (cH - cL) / cL4 * (term_H + term_L - term_X);
}

// Factorized right-hand side sign test (fourth condition of system two).
inline double condition_four_factor(const DerivedParams& d) {
    const double cH = d.c_H, cL = d.c_L;
    return cH * (cL - 1.0) * (cL - 1.0) * (cH - cL) * (cH - cL) *
           (cH + cL * cL - 2.0 * cL);
}

struct CoefficientCheck {
    double worst_rel = 0;
    bool ok(double tol = 1e-9) const { return worst_rel <= tol; }
};

inline CoefficientCheck verify_coefficient_tables(const DerivedParams& d) {
    const SquaredRelation p = squared_relation_printed(d);
    const SquaredRelation q = squared_relation_derived(d);
    CoefficientCheck c;
    auto rel = [&](double a, double b) {
        const double scale = std::max({1e-300, std::fabs(a), std::fabs(b)});
        c.worst_rel = std::max(c.worst_rel, std::fabs(a - b) / scale);
    };
    rel(p.lam2, q.lam2);
    rel(p.lam1, q.lam1);
    rel(p.lam0, q.lam0);
    rel(c_HL_bound_printed(d), c_HL_bound(d));
    rel(delta_factored_printed(d), delta_from_coefficients(q));
    // venditore factorization reproduces the linear coefficient
    rel((d.c_L - d.c_H) * venditore_inner(d) / (d.sigma_H2() * d.sigma_L2() * d.c_L * d.c_L),
        -0.5 * q.lam1);
    // factored right-hand side reproduces the constant coefficient
    rel(-condition_four_factor(d) / std::pow(d.c_L, 4), -q.lam0);
    return c;
}

// ---- condition systems ---------------------------------------------------

struct ConditionSystemOne {
    double v1 = 0, v2 = 0, v3 = 0;  // the three polynomial expressions, as printed
    bool pass1 = false, pass2 = false, pass3 = false;
    bool overall = false;
};

inline ConditionSystemOne condition_system_one(const DerivedParams& d) {
    const double cH = d.c_H, cL = d.c_L;
    ConditionSystemOne s;
    s.v1 = (cL - 2.0) * (cH - cL);
    s.v2 = (cL - 1.0) * (2.0 * cH * cH + cH * cL * cL - 4.0 * cH * cL + cL * cL);
    s.v3 = (cL - cH) * venditore_inner(d);
    s.pass1 = s.v1 >= 0.0;
    s.pass2 = s.v2 <= 0.0;
    s.pass3 = s.v3 >= 0.0;
    s.overall = s.pass1 && s.pass2 && s.pass3;
    return s;
}

// The second system carries corrected strict/non-strict marks in the source;
// AsPrinted follows those marks, Flipped toggles each marked one.
enum class Strictness { AsPrinted, Flipped };

struct ConditionSystemTwo {
    double v1 = 0, v2 = 0, v3 = 0, v4 = 0, delta = 0;
    double delta_quarter_disc = 0;
    bool pass1 = false, pass2 = false, pass3 = false, pass4 = false, pass5 = false;
    bool overall = false;
};

inline ConditionSystemTwo condition_system_two(const DerivedParams& d,
                                               Strictness strict = Strictness::AsPrinted) {
    const double cH = d.c_H, cL = d.c_L;
    ConditionSystemTwo s;
    s.v1 = (cL - 2.0) * (cH - cL);
    s.v2 = (cL - 1.0) * (2.0 * cH * cH + cH * cL * cL - 4.0 * cH * cL + cL * cL);
    s.v3 = (cL - cH) * venditore_inner(d);
    s.v4 = condition_four_factor(d);
    const SquaredRelation q = squared_relation_derived(d);
    s.delta = delta_from_coefficients(q);
    s.delta_quarter_disc = delta_quarter_discriminant(q);
    s.pass1 = s.v1 >= 0.0;
    if (strict == Strictness::AsPrinted) {
        s.pass2 = s.v2 <= 0.0;
        s.pass3 = s.v3 < 0.0;
        s.pass4 = s.v4 <= 0.0;
    } else {
        s.pass2 = s.v2 < 0.0;
        s.pass3 = s.v3 <= 0.0;
        s.pass4 = s.v4 < 0.0;
    }
    s.pass5 = s.delta > 0.0;
    s.overall = s.pass1 && s.pass2 && s.pass3 && s.pass4 && s.pass5;
    return s;
}

} // namespace migwave
