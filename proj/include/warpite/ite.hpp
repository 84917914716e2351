#pragma once

#include "warpite/dtn.hpp"
#include "warpite/manifold.hpp"
#include "warpite/tolerances.hpp"

#include <vector>

namespace warpite {

enum class ITEKind { Regular, Singular };
const char* ite_kind_name(ITEKind k);

struct ITERecord {
    double lambda = 0;
    ITEKind kind = ITEKind::Regular;
    std::vector<int> modes;
    long long multiplicity = 0;
    double residual = 0;      // smallest |mu| at the root, or the pole mismatch for singular records
    bool at_pole = false;     // kernel detected at a Dirichlet pole through the regular part
    bool ambiguous = false;   // tangential touch: root order could not be resolved
    long long crossing_delta = 0;  // change in the count of negative mu values across the root
};

struct SearchOptions {
    int scan_divisions = 64;  // samples per gap between consecutive poles
    int threads = 1;
    double window_rel = 1e-5; // initial pole window, relative to the pole
};

// Modes 0..l_cert-1 are scanned; mode l_cert is the first with a certified positive tail on [a, b].
int certified_mode(const ManifoldPair& pair, double a, double b, int l_max, const Tolerances& tol = {});

std::vector<ITERecord> find_regular_ites(const ManifoldPair& pair, double a, double b, int l_max,
                                         const SearchOptions& opts = {}, const Tolerances& tol = {});
// Overlap eigenvalues from the pole catalog.
std::vector<ITERecord> find_singular_ites(const ManifoldPair& pair, double a, double b, int l_max,
                                          const Tolerances& tol = {});
// Both kinds on (a, b], sorted by lambda.
std::vector<ITERecord> find_ites(const ManifoldPair& pair, double a, double b, int l_max,
                                 const SearchOptions& opts = {}, const Tolerances& tol = {});

// Smallest Dirichlet eigenvalue over both manifolds.
double lowest_dirichlet(const ManifoldPair& pair, const Tolerances& tol = {});
// N_T(lambda) = number of ITEs in (alpha, lambda] with multiplicity; alpha must sit below both Dirichlet spectra.
long long counting_function(const ManifoldPair& pair, double alpha, double lambda, int l_max,
                            const SearchOptions& opts = {}, const Tolerances& tol = {});
long long counting_function(const std::vector<ITERecord>& ites, double lambda);

}  // namespace warpite
