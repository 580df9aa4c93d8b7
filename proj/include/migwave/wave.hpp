#pragma once

#include <cmath>

#include "migwave/params.hpp"

namespace migwave {

// Closed-form steady profile K and its one-sided derivatives.
//
//   K(y) = gamma e^{eta*} exp[(1-c_L)(y-eta*)]                 y <= eta*
//   K(y) = 1 - (1 - gamma e^{eta*}) exp[(1-c_H)(y-eta*)]       y >  eta*
//
// K is C^1 across eta*; K'' jumps there, so second derivatives carry a side.
struct WaveProfile {
    DerivedParams derived;
    double k_gamma_eta = 0;         // K(eta*) = gamma e^{eta*}
    double k_prime_at_interface = 0;  // K'(eta*), same from both sides
    double k_second_jump = 0;         // [K'']_{eta*} = K''(eta*+) - K''(eta*-)

    double rate_left() const { return 1.0 - derived.c_L; }   // > 0
    double rate_right() const { return 1.0 - derived.c_H; }  // < 0

    bool on_left(double y, Side side_at_interface) const {
        const double eta = derived.eta_star;
        return y < eta || (y == eta && side_at_interface == Side::Left);
    }

    double value(double y) const {
        const double eta = derived.eta_star;
        if (y <= eta) return k_gamma_eta * std::exp(rate_left() * (y - eta));
        return 1.0 - (1.0 - k_gamma_eta) * std::exp(rate_right() * (y - eta));
    }

    // One-sided first derivative; the side only matters at y == eta*.
    double prime(double y, Side side = Side::Left) const {
        const double eta = derived.eta_star;
        if (on_left(y, side)) return k_gamma_eta * rate_left() * std::exp(rate_left() * (y - eta));
        return -(1.0 - k_gamma_eta) * rate_right() * std::exp(rate_right() * (y - eta));
    }

    double second(double y, Side side) const {
        const double eta = derived.eta_star;
        const double rl = rate_left(), rr = rate_right();
        if (on_left(y, side)) return k_gamma_eta * rl * rl * std::exp(rl * (y - eta));
        return -(1.0 - k_gamma_eta) * rr * rr * std::exp(rr * (y - eta));
    }
};

inline WaveProfile build_wave(const DerivedParams& derived) {
    if (!std::isfinite(derived.eta_star))
        throw ValidationError("build_wave: eta_star undefined for these parameters");
    WaveProfile w;
    w.derived = derived;
    w.k_gamma_eta = derived.params.gamma * std::exp(derived.eta_star);
    w.k_prime_at_interface = w.k_gamma_eta * (1.0 - derived.c_L);
    const double sH2 = derived.sigma_H2(), sL2 = derived.sigma_L2();
    w.k_second_jump = w.k_gamma_eta * (1.0 - derived.c_L) *
                      (2.0 * derived.params.delta / (sH2 * sL2)) * (sH2 - sL2);
    return w;
}

// 1/2 sigma^2 K'' + (delta - 1/2 sigma^2) K', with sigma chosen by side of y.
// Exact zero up to rounding; y == eta* needs the one-sided variant.
inline double ode_residual_one_sided(const WaveProfile& w, double y, Side side) {
    const DerivedParams& d = w.derived;
    const double s2 = w.on_left(y, side) ? d.sigma_L2() : d.sigma_H2();
    return 0.5 * s2 * w.second(y, side) + (d.params.delta - 0.5 * s2) * w.prime(y, side);
}

inline double ode_residual(const WaveProfile& w, double y) {
    const double eta = w.derived.eta_star;
    const double ulp_band = 4.0 * std::numeric_limits<double>::epsilon() *
                            std::max({1.0, std::fabs(eta), std::fabs(y)});
    if (std::fabs(y - eta) <= ulp_band)
        throw ValidationError("ode_residual: y is the interface; use the one-sided variant");
    return ode_residual_one_sided(w, y, y < w.derived.eta_star ? Side::Left : Side::Right);
}

// e^{-rt} K(x + ct): the profile every solution relaxes to in original coordinates.
inline double attenuated_wave(const WaveProfile& w, double t, double x) {
    if (t < 0.0) throw ValidationError("attenuated_wave: t must be >= 0");
    const DerivedParams& d = w.derived;
    return std::exp(-d.params.r * t) * w.value(x + d.c * t);
}

} // namespace migwave
