#pragma once

#include <random>

#include "migwave/params.hpp"

namespace migwave::testing {

// Seeded sampler over the admissible domain: c_L in (0,1), c_H in (1,3].
inline FinancialParams random_admissible(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u_cL(0.05, 0.95);
    std::uniform_real_distribution<double> u_cH(1.05, 3.0);
    std::uniform_real_distribution<double> u_delta(0.01, 0.15);
    std::uniform_real_distribution<double> u_gamma(0.1, 0.95);
    std::uniform_real_distribution<double> u_r(0.005, 0.1);
    return params_from_ratios(u_delta(rng), u_gamma(rng), u_r(rng), u_cH(rng), u_cL(rng));
}

// Anywhere in the positive orthant with gamma in (0,1); mostly inadmissible.
inline FinancialParams random_positive(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u_c(0.05, 5.0);
    std::uniform_real_distribution<double> u_delta(0.01, 0.3);
    std::uniform_real_distribution<double> u_gamma(0.1, 0.95);
    std::uniform_real_distribution<double> u_r(0.005, 0.1);
    return params_from_ratios(u_delta(rng), u_gamma(rng), u_r(rng), u_c(rng), u_c(rng));
}

} // namespace migwave::testing
