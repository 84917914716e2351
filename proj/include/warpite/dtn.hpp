#pragma once

#include "warpite/manifold.hpp"
#include "warpite/radial.hpp"
#include "warpite/tolerances.hpp"

#include <Eigen/Dense>

#include <vector>

namespace warpite {

struct DifferenceSample {
    double lambda = 0;          // evaluation point (the refined pole when regularized)
    int l = 0;
    Eigen::MatrixXd diff_matrix;
    bool pole_m1 = false;
    bool pole_m2 = false;
    bool regularized = false;   // diff_matrix is the regular part H(lambda0)
};

struct MuSample {
    double lambda = 0;
    int l = 0;
    std::vector<double> values;  // ascending
    int order_s = 0;
};

struct NegativeCount {
    long long count = 0;
    int l_star = 0;                               // first certified mode
    std::vector<std::pair<int, int>> negatives;   // (mode, number of negative mu values) for nonzero entries
};

struct PoleMode {
    int l = 0;
    long long mult = 1;
    bool in_m1 = false, in_m2 = false;
    bool overlap = false;      // residue ranges intersect in this mode
    double lambda_m1 = 0, lambda_m2 = 0;
    std::vector<double> data_m1, data_m2;
};

struct PoleEntry {
    double lambda0 = 0;
    long long m1 = 0, m2 = 0, overlap = 0;
    std::vector<PoleMode> modes;
    double window = 0;   // half-width of the resolved neighbourhood, set by assign_pole_windows
};

// Regular part of lambda -> D(lambda) at a simple pole lambda0 by symmetric Laurent subtraction.
template <class F>
Eigen::MatrixXd laurent_regular_part(F&& eval, double lambda0) {
    const double h = 1e-4 * std::max(1.0, lambda0);
    auto even = [&](double s) { return Eigen::MatrixXd(0.5 * (eval(lambda0 + s) + eval(lambda0 - s))); };
    return (4.0 * even(0.5 * h) - even(h)) / 3.0;
}

// Nearest mode-l Dirichlet eigenvalue to lambda (which must lie within a few pole distances of it).
double refine_pole(const WarpedManifold& m, int l, double lambda, const Tolerances& tol);

DifferenceSample difference_mode(const ManifoldPair& pair, double lambda, int l, const Tolerances& tol = {});
// Weight (1 + kappa/f(b)^2)^{(1+s)/2} per component.
Eigen::VectorXd mu_weights(const ManifoldPair& pair, int l);
MuSample mu_mode(const ManifoldPair& pair, double lambda, int l, const Tolerances& tol = {});
// Eigenvalues of gamma W^{1/2} M W^{1/2} for a given difference matrix.
std::vector<double> mu_from_matrix(const ManifoldPair& pair, int l, const Eigen::MatrixXd& diff);

NegativeCount count_negative(const ManifoldPair& pair, double lambda, int l_max, const Tolerances& tol = {});

// Dirichlet poles of both manifolds in (a, b], merged within the degeneracy tolerance.
std::vector<PoleEntry> pole_catalog(const ManifoldPair& pair, double a, double b, int l_max,
                                    const Tolerances& tol = {});
// Sets each entry's window: eps starts at min(eps_rel * lambda0, gap / 4) and grows by 4 until the mu values of the
// pole's modes at lambda0 +- eps agree to 10% with a 1000x tighter integration. Near coincident poles with
// cancelling residues the difference is analytic but numerically dominated by pole-position error.
// Fails with PoleSpacing once 2 eps reaches a neighbouring pole.
void assign_pole_windows(const ManifoldPair& pair, std::vector<PoleEntry>& catalog, const Tolerances& tol = {},
                         double eps_rel = 1e-5);
// Per-mode Dirichlet spectra up to b for one manifold; modes stop once kappa exceeds b * max(n f^2).
std::vector<std::vector<DirichletEigenRecord>> mode_spectra(const WarpedManifold& m, double b, int l_max,
                                                            const Tolerances& tol = {});

}  // namespace warpite
