#pragma once

#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "migwave/errors.hpp"

namespace migwave {

struct FinancialParams {
    double delta;    // risk discount rate (1/time)
    double gamma;    // threshold proportion, in (0,1)
    double r;        // risk-free rate (1/time)
    double sigma_H;  // high-grade volatility (1/sqrt(time))
    double sigma_L;  // low-grade volatility (1/sqrt(time))
};

struct AdmissibilityVerdict {
    bool admissible = false;
    std::vector<std::string> violations;  // each violated inequality, by name

    std::string to_string() const {
        if (admissible) return "admissible";
        std::string s = "inadmissible:";
        for (const auto& v : violations) s += " [" + v + "]";
        return s;
    }
};

// Everything downstream is phrased in these derived constants.
struct DerivedParams {
    FinancialParams params{};
    double c_H = 0;            // 2*delta/sigma_H^2, in (1,3] on the admissible domain
    double c_L = 0;            // 2*delta/sigma_L^2, in (0,1) on the admissible domain
    double c = 0;              // wave speed r - delta
    double A = 0;              // interface coupling constant (1-c_L)(sigma_L^2-sigma_H^2)/sigma_H^2
    double eta_star = 0;       // steady interface position (NaN outside its domain)
    double x0 = 0;             // ln(1-c_L), left endpoint of Phi-invertibility (NaN if c_L>=1)
    double edge_L = 0;         // branch point of mu^L_+-: -sigma_L^2 (c_L-1)^2 / 8
    double edge_H = 0;         // branch point of mu^H_+-
    double spectrum_edge = 0;  // max(edge_L, edge_H), right end of the essential halfline
    double spectrum_edge_alt = 0;  // dimensionless halfline-endpoint variant, kept for comparison

    double sigma_H2() const { return params.sigma_H * params.sigma_H; }
    double sigma_L2() const { return params.sigma_L * params.sigma_L; }
    double k_at_interface() const { return params.gamma * std::exp(eta_star); }  // K(eta*) = gamma e^{eta*}
};

inline AdmissibilityVerdict validate(const FinancialParams& p) {
    AdmissibilityVerdict v;
    auto finite_pos = [&](double x, const char* name) {
        if (!std::isfinite(x)) {
            v.violations.push_back(std::string(name) + " non-finite");
        } else if (x <= 0.0) {
            v.violations.push_back(std::string(name) + " <= 0");
        }
    };
    finite_pos(p.delta, "delta");
    finite_pos(p.gamma, "gamma");
    finite_pos(p.r, "r");
    finite_pos(p.sigma_H, "sigma_H");
    finite_pos(p.sigma_L, "sigma_L");
    if (!v.violations.empty()) return v;

    if (p.gamma >= 1.0) v.violations.push_back("gamma < 1");
    // sigma_H^2/2 < delta < sigma_L^2/2, strict; c_H <= 3 at equality.
    const double sH2 = p.sigma_H * p.sigma_H;
    const double sL2 = p.sigma_L * p.sigma_L;
    if (!(sH2 / 2.0 < p.delta)) v.violations.push_back("sigma_H^2/2 < delta");
    if (!(p.delta < sL2 / 2.0)) v.violations.push_back("delta < sigma_L^2/2");
    if (!(2.0 * p.delta / sH2 <= 3.0)) v.violations.push_back("c_H <= 3");
    v.admissible = v.violations.empty();
    return v;
}

class InadmissibleError : public ValidationError {
public:
    explicit InadmissibleError(AdmissibilityVerdict verdict)
        : ValidationError(verdict.to_string()), verdict(std::move(verdict)) {}
    AdmissibilityVerdict verdict;
};

namespace detail {

inline DerivedParams derive_fields(const FinancialParams& p) {
    DerivedParams d;
    d.params = p;
    const double sH2 = p.sigma_H * p.sigma_H;
    const double sL2 = p.sigma_L * p.sigma_L;
    d.c_H = 2.0 * p.delta / sH2;
    d.c_L = 2.0 * p.delta / sL2;
    d.c = p.r - p.delta;
    d.A = (1.0 - d.c_L) * (sL2 - sH2) / sH2;
    const double eta_arg = sL2 * (2.0 * p.delta - sH2) / (2.0 * p.delta * p.gamma * (sL2 - sH2));
    d.eta_star = eta_arg > 0.0 ? std::log(eta_arg) : std::numeric_limits<double>::quiet_NaN();
    d.x0 = d.c_L < 1.0 ? std::log(1.0 - d.c_L) : std::numeric_limits<double>::quiet_NaN();
    // written as -(s2*sq)/8 so that the mu radicand (s2*sq + 8*lambda)/(4*s2)
    // cancels exactly in floating point at lambda = edge_J
    d.edge_L = -(sL2 * ((d.c_L - 1.0) * (d.c_L - 1.0))) / 8.0;
    d.edge_H = -(sH2 * ((d.c_H - 1.0) * (d.c_H - 1.0))) / 8.0;
    d.spectrum_edge = std::max(d.edge_L, d.edge_H);
    auto alt = [](double c) { return c * c * (c * c - 1.0) * (c * c - 1.0) / 8.0; };
    d.spectrum_edge_alt = -std::min(alt(d.c_L), alt(d.c_H));
    return d;
}

} // namespace detail

// Derivation for admissible parameters only.
inline DerivedParams derive(const FinancialParams& p) {
    AdmissibilityVerdict v = validate(p);
    if (!v.admissible) throw InadmissibleError(std::move(v));
    return detail::derive_fields(p);
}

// Derivation with no admissibility gate. Used by classification sweeps, which
// deliberately roam outside the admissible domain; eta_star/x0 may be NaN there.
inline DerivedParams derive_unchecked(const FinancialParams& p) {
    for (double x : {p.delta, p.gamma, p.r, p.sigma_H, p.sigma_L}) {
        if (!std::isfinite(x) || x <= 0.0)
            throw ValidationError("derive_unchecked: fields must be finite and positive");
    }
    return detail::derive_fields(p);
}

// Convenient when scanning the (c_L, c_H) plane directly.
inline FinancialParams params_from_ratios(double delta, double gamma, double r,
                                          double c_H, double c_L) {
    if (c_H <= 0.0 || c_L <= 0.0 || delta <= 0.0)
        throw ValidationError("params_from_ratios: delta, c_H, c_L must be positive");
    FinancialParams p;
    p.delta = delta;
    p.gamma = gamma;
    p.r = r;
    p.sigma_H = std::sqrt(2.0 * delta / c_H);
    p.sigma_L = std::sqrt(2.0 * delta / c_L);
    return p;
}

enum class Side { Left, Right };

// Exponential weights. q_L lives on (-inf, eta*], q_H on [eta*, +inf);
// evaluation elsewhere is permitted, norms only ever use the legal half-line.
inline double weight(const DerivedParams& d, Side side, double y) {
    const double cj = side == Side::Left ? d.c_L : d.c_H;
    return std::exp(-0.5 * (cj - 1.0) * y);
}

// exponent b_J with q_J(y) = exp(-b_J y)
inline double weight_rate(const DerivedParams& d, Side side) {
    const double cj = side == Side::Left ? d.c_L : d.c_H;
    return 0.5 * (cj - 1.0);
}

// ---- presets ------------------------------------------------------------

// P0 gives eta* = 0 exactly, which keeps hand checks simple.
inline FinancialParams preset_P0() { return {0.05, 0.8, 0.03, 0.2, 0.4}; }
// c_H = 2.98, close to the c_H <= 3 boundary.
inline FinancialParams preset_P1() { return {0.05, 0.8, 0.03, std::sqrt(0.1 / 2.98), 0.4}; }
// delta close to sigma_L^2/2 (c_L = 0.99).
inline FinancialParams preset_P2() { return {0.0792, 0.8, 0.03, 0.26, 0.4}; }

inline FinancialParams preset(const std::string& name) {
    if (name == "P0") return preset_P0();
    if (name == "P1") return preset_P1();
    if (name == "P2") return preset_P2();
    throw ValidationError("unknown preset '" + name + "' (have P0, P1, P2)");
}

} // namespace migwave
