#pragma once

#include <cmath>

#include "gapcount/errors.hpp"

namespace gapcount {

// Normalized Hermite function phi_j (j 1-based; phi_1 is the ground state),
// three-term recurrence on the normalized functions themselves.
inline double hermite_phi(int j, double t) {
    if (j < 1) throw ConfigError("hermite_phi: band index must be >= 1");
    double p0 = std::pow(M_PI, -0.25) * std::exp(-0.5 * t * t);
    if (j == 1) return p0;
    double p1 = std::sqrt(2.0) * t * p0;
    for (int q = 1; q < j - 1; ++q) {
        double p2 = std::sqrt(2.0 / (q + 1)) * t * p1 - std::sqrt(static_cast<double>(q) / (q + 1)) * p0;
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

}  // namespace gapcount
