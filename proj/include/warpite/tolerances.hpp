#pragma once

#include <algorithm>
#include <cmath>

namespace warpite {

struct Tolerances {
    double ode_rel = 1e-10;
    double root_rel = 1e-9;
    double pole_tol = 1e-7;         // scaled by max(1, |lambda|)
    double degeneracy_tol = 1e-8;   // scaled by max(1, |lambda0|)

    double pole_tolerance(double lambda) const { return pole_tol * std::max(1.0, std::abs(lambda)); }
    double degeneracy_tolerance(double lambda) const { return degeneracy_tol * std::max(1.0, std::abs(lambda)); }
};

}  // namespace warpite
