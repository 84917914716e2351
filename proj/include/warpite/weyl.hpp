#pragma once

#include "warpite/dtn.hpp"
#include "warpite/ite.hpp"
#include "warpite/manifold.hpp"

#include <vector>

namespace warpite {

struct WeylConstant {
    double value = 0;          // (2 pi)^{-d} omega_d * int n^{d/2} dV
    double literal_value = 0;  // same formula with the volume density squared, reported for comparison
    double volume = 0;         // int n^{d/2} dV
};

WeylConstant weyl_constant(const WarpedManifold& m);
// Dirichlet counting function of one manifold (eigenvalues <= lambda with multiplicity).
long long dirichlet_counting(const WarpedManifold& m, double lambda, int l_max, const Tolerances& tol = {});

struct JumpReport {
    double lambda0 = 0;
    double epsilon = 0;
    long long m1 = 0, m2 = 0, overlap = 0;
    long long delta_measured = 0;   // N_-(lambda0 + eps) - N_-(lambda0 - eps)
    long long delta_crossings = 0;  // recorded regular mu crossings inside the window
    long long delta = 0;            // pole part: measured minus crossings
    long long predicted = 0;        // gamma (m2 - m1)
    bool consistent = false;        // exact when no overlap, within the overlap otherwise
};

// Jump of N_- across a catalogued pole over its window (1e-5 lambda0 unless widened by assign_pole_windows).
// Regular ITE records inside the window are removed from the measured jump; PoleSpacing when another
// catalogued pole lies within 2 eps.
JumpReport jump_analysis(const ManifoldPair& pair, const PoleEntry& pole, const std::vector<PoleEntry>& catalog,
                         int l_max, const Tolerances& tol = {}, const std::vector<ITERecord>& ites = {});

struct WeylGridPoint {
    double lambda = 0;          // evaluation point (moved out of a pole window when needed)
    long long n_t = 0;          // ITEs in (alpha, lambda]
    long long pole_sum = 0;     // gamma * sum (m1 - m2) over poles in (alpha, lambda]
    long long bound = 0;        // pole_sum - N_-(alpha)
    long long slack = 0;        // n_t - bound
    long long n_minus = 0;      // N_-(lambda)
    long long n_zero = 0;       // signed recorded mu crossings in (alpha, lambda]
    long long n_pole = 0;       // sum of measured pole jumps
    long long n_singular = 0;
    bool decomposition_ok = false;
    bool crossing_bound_ok = false;  // n_zero + n_singular <= n_t
};

struct WeylReport {
    double alpha = 0;
    WeylConstant v1, v2;
    double predicted_slope = 0;      // gamma (V1 - V2)
    long long n_minus_alpha = 0;
    std::vector<WeylGridPoint> grid;
    std::vector<JumpReport> jumps;
    std::vector<ITERecord> ites;
    double fitted_slope = 0;         // A in N_T ~ A lambda^{d/2} + B lambda^{(d-1)/2}
    double fitted_offset = 0;
    double fitted_constant = 0;      // max |N_T - A lambda^{d/2}| / lambda^{(d-1)/2} over the grid
    bool bound_holds = false;
};

WeylReport verify_lower_bound(const ManifoldPair& pair, double alpha, const std::vector<double>& grid, int l_max,
                              const SearchOptions& opts = {}, const Tolerances& tol = {});

}  // namespace warpite
