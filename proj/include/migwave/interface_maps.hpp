#pragma once

#include <cmath>
#include <sstream>

#include "migwave/params.hpp"

namespace migwave {

// The scalar interface algebra:
//
//   Phi(x)    = gamma e^{eta*} (e^x - 1 - x + c_L x)      strictly increasing on (x0, inf)
//   Psi       = Phi^{-1} on (Phi(x0), inf), Psi(0) = 0
//   R(w)      = Psi(w) - Psi'(0) w                        the inversion remainder
//   Lambda(x) = x + K'(eta*) Psi(x)                       strictly increasing, Lambda(0) = 0
//
// Psi and Lambda^{-1} are computed by safeguarded Newton with analytic
// derivatives; both maps are strictly monotone on their stated domains.
class InterfaceMaps {
public:
    explicit InterfaceMaps(const DerivedParams& d, double margin_rel = 1e-9)
        : d_(d), margin_rel_(margin_rel) {
        if (!(d.c_L < 1.0) || !std::isfinite(d.eta_star))
            throw ValidationError("InterfaceMaps: needs c_L < 1 and a finite eta_star");
        scale_ = d.params.gamma * std::exp(d.eta_star);
        kprime_eta_ = scale_ * (1.0 - d.c_L);
        x0_ = std::log(1.0 - d.c_L);
        phi_x0_ = phi(x0_);
    }

    const DerivedParams& derived() const { return d_; }

    double phi(double x) const { return scale_ * (std::expm1(x) - x + d_.c_L * x); }
    double phi_prime(double x) const { return scale_ * (std::expm1(x) + d_.c_L); }
    double x0() const { return x0_; }
    double phi_x0() const { return phi_x0_; }
    double margin() const { return margin_rel_ * std::fabs(phi_x0_); }

    // Psi'(0) = 1/Phi'(0) = e^{-eta*} sigma_L^2 / (2 gamma delta)
    double psi_prime0() const { return 1.0 / (scale_ * d_.c_L); }

    double psi(double w) const {
        const double lo_val = phi_x0_ + margin();
        if (!(w > lo_val)) {
            std::ostringstream os;
            os << "psi: w = " << w << " is at or below Phi(x0) + margin = " << lo_val
               << " (Phi(x0) = " << phi_x0_ << ")";
            throw OutOfRangeError(os.str());
        }
        if (w == 0.0) return 0.0;

        double lo = x0_;           // Phi(lo) <= lo_val < w
        double hi = std::max(1.0, psi_prime0() * w * 2.0);
        while (phi(hi) < w) hi = x0_ + 2.0 * (hi - x0_);

        double x = std::min(std::max(psi_prime0() * w, lo + 1e-12), hi);
        const double tol = 1e-14 * std::max(1.0, std::fabs(w));
        for (int it = 0; it < 200; ++it) {
            const double fx = phi(x) - w;
            if (std::fabs(fx) <= tol) return x;
            if (fx > 0.0) hi = x; else lo = x;
            const double dfx = phi_prime(x);
            double xn = dfx > 0.0 ? x - fx / dfx : lo;
            if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);  // bisection safeguard
            if (xn == x) break;
            x = xn;
        }
        if (std::fabs(phi(x) - w) <= 1e-12 * std::max(1.0, std::fabs(w))) return x;
        throw RegimeError("psi: Newton/bisection failed to converge");
    }

    // Psi'(w) = 1/Phi'(Psi(w))
    double psi_prime_at(double w) const { return 1.0 / phi_prime(psi(w)); }

    double remainder(double w) const { return psi(w) - psi_prime0() * w; }

    double k_prime_at_interface() const { return kprime_eta_; }

    double lambda_map(double x) const { return x + kprime_eta_ * psi(x); }

    // Lambda'(x) = 1 + K'(eta*) Psi'(x) > 1 on the whole domain.
    double lambda_inv(double v) const {
        if (v == 0.0) return 0.0;
        const double lo_dom = phi_x0_ + margin();
        double lo, hi;
        if (v > 0.0) {
            lo = 0.0;
            hi = v;  // Lambda(x) > x for x > 0
            while (lambda_map(hi) < v) hi *= 2.0;
        } else {
            // Lambda(x) <= x for x <= 0, so x = v brackets from below when in domain.
            hi = 0.0;
            lo = v > lo_dom ? v : lo_dom * (1.0 - 1e-12) + margin();
            if (lambda_map(lo) > v)
                throw OutOfRangeError("lambda_inv: v below the invertibility basin");
        }
        double x = 0.5 * (lo + hi);
        const double tol = 1e-14 * std::max(1.0, std::fabs(v));
        for (int it = 0; it < 200; ++it) {
            const double fx = lambda_map(x) - v;
            if (std::fabs(fx) <= tol) return x;
            if (fx > 0.0) hi = x; else lo = x;
            const double dfx = 1.0 + kprime_eta_ / phi_prime(psi(x));
            double xn = x - fx / dfx;
            if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
            if (xn == x) break;
            x = xn;
        }
        if (std::fabs(lambda_map(x) - v) <= 1e-12 * std::max(1.0, std::fabs(v))) return x;
        throw RegimeError("lambda_inv: Newton/bisection failed to converge");
    }

private:
    DerivedParams d_;
    double margin_rel_;
    double scale_ = 0;       // gamma e^{eta*}
    double kprime_eta_ = 0;  // K'(eta*)
    double x0_ = 0;
    double phi_x0_ = 0;
};

} // namespace migwave
