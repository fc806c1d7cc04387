#pragma once

#include <cmath>
#include <stdexcept>

namespace pwqnet {

// Numeric tolerances used across the library. All comparisons are absolute
// after scaling by (1 + |reference value|).
struct ToleranceConfig {
    double eps_c = 1e-9;  // continuity/convexity validation
    double eps_v = 1e-8;  // verification margin
    double eps_q = 1e-6;  // QP KKT residuals

    void check() const {
        if (!(eps_c > 0.0) || !(eps_v > 0.0) || !(eps_q > 0.0)) {
            throw std::invalid_argument("ToleranceConfig: tolerances must be strictly positive");
        }
    }

    static double scaled(double tol, double reference) {
        return tol * (1.0 + std::abs(reference));
    }
};

}  // namespace pwqnet
