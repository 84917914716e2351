#pragma once

// Reference values computed independently of the radial solver.

#include <boost/math/special_functions/bessel.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

namespace oracle {

// J_nu(x) by its power series in long double; accurate for x up to ~12 and integer nu >= 0.
inline long double bessel_j(int nu, long double x) {
    long double term = 1.0L;
    for (int k = 1; k <= nu; ++k) term *= x / (2.0L * k);
    long double sum = term;
    const long double q = -x * x / 4.0L;
    for (int k = 1; k < 200; ++k) {
        term *= q / (static_cast<long double>(k) * (k + nu));
        sum += term;
        if (std::fabs(term) < 1e-22L * std::fabs(sum)) break;
    }
    return sum;
}

// Unit disk, index 1: mode-l D-N scalar k J_l'(k)/J_l(k) = l - k J_{l+1}(k)/J_l(k), k = sqrt(lambda).
inline double disk_dtn(int l, double lambda) {
    const long double k = std::sqrt(static_cast<long double>(lambda));
    return static_cast<double>(l - k * bessel_j(l + 1, k) / bessel_j(l, k));
}

// Unit disk, index n: j-th Dirichlet eigenvalue of mode l is j_{l,j}^2 / n.
inline double disk_eigenvalue(int l, int j, double n = 1.0) {
    const double z = boost::math::cyl_bessel_j_zero(static_cast<double>(l), j);
    return z * z / n;
}

// Flat cylinder [0, pi] x S^1 with index n: eigenvalues (j^2 + l^2)/n, j >= 1, multiplicity 2 for l > 0.
inline long long cylinder_count(double lambda, double n = 1.0) {
    long long c = 0;
    for (long long l = 0; l * l <= lambda * n; ++l)
        for (long long j = 1; j * j + l * l <= lambda * n + 1e-9; ++j) c += (l == 0 ? 1 : 2);
    return c;
}

// Closed-form mode-l D-N matrix of the flat cylinder [0, pi] with index n (outward normals -d/dr, +d/dr).
inline std::vector<double> cylinder_dtn(int l, double lambda, double n = 1.0) {
    const double k2 = n * lambda - l * l;
    // Row-major [[a, b], [b, a]] in the order [inner, outer], from v = sin(k(pi - r)) / sin(k pi).
    double a, b;
    if (k2 > 0) {
        const double k = std::sqrt(k2);
        a = k * std::cos(k * M_PI) / std::sin(k * M_PI);
        b = -k / std::sin(k * M_PI);
    } else {
        const double k = std::sqrt(-k2);
        a = k * std::cosh(k * M_PI) / std::sinh(k * M_PI);
        b = -k / std::sinh(k * M_PI);
    }
    return {a, b, b, a};
}

// Same-mode coincidences of the cylinder pair n1 = 1, n2 = 4 in (0, top]: lambda = j1^2 + l^2 = (j2^2 + l^2)/4.
// Eigenfunctions sin(j r) have boundary data proportional to (1, (-1)^(j+1)), so the residue ranges meet only
// when j1 and j2 have the same parity. Returns lambda -> modes counted with multiplicity.
inline std::map<long long, long long> cylinder_pair_coincidences(long long top, bool parallel_only) {
    std::map<long long, long long> out;
    for (long long l = 0; l * l < top; ++l)
        for (long long j1 = 1; j1 * j1 + l * l <= top; ++j1) {
            const long long lam = j1 * j1 + l * l;
            const long long j2sq = 4 * lam - l * l;
            const long long j2 = std::llround(std::sqrt(static_cast<double>(j2sq)));
            if (j2 * j2 != j2sq) continue;
            if (parallel_only && (j1 - j2) % 2 != 0) continue;
            out[lam] += (l == 0 ? 1 : 2);
        }
    return out;
}

// Cylinder pair n1 = 1, n2 = 4: D-N matrices share the eigenvectors (1, 1) and (1, -1) with eigenvalues
// -k tan(k pi / 2) and k cot(k pi / 2). Returns g_even or g_odd = (eigenvalue for n1) - (eigenvalue for n2).
inline double cylinder_pair_branch(int l, double lambda, bool even) {
    auto branch = [&](double n) {
        const double k2 = n * lambda - static_cast<double>(l) * l;
        if (k2 > 0) {
            const double k = std::sqrt(k2);
            return even ? -k * std::tan(k * M_PI / 2) : k / std::tan(k * M_PI / 2);
        }
        const double k = std::sqrt(-k2);
        return even ? k * std::tanh(k * M_PI / 2) : k / std::tanh(k * M_PI / 2);
    };
    return branch(1.0) - branch(4.0);
}

struct BranchRoot {
    double lambda;
    bool singular;  // both manifolds have a pole of this branch here: the root lies in the residue range
};

// Real zeros of both branches in mode l on (a, b): sign changes on a fine grid refined by bisection, keeping only
// those where the function is small (a sign change across a pole has a large value). At a coincident pole with
// cancelling residues the continuation can vanish; such roots are flagged singular and merged.
inline std::vector<BranchRoot> cylinder_pair_roots(int l, double a, double b, double step = 1e-3) {
    std::vector<BranchRoot> roots;
    for (bool even : {true, false}) {
        auto g = [&](double x) { return cylinder_pair_branch(l, x, even); };
        // tan(k pi / 2) has poles at odd k, cot(k pi / 2) at even k > 0.
        auto on_pole = [&](double n, double x) {
            const double k2 = n * x - static_cast<double>(l) * l;
            if (k2 <= 0) return false;
            const double k = std::sqrt(k2), r = std::round(k);
            return r > 0 && std::abs(k - r) < 1e-6 && (static_cast<long long>(r) % 2 == (even ? 1 : 0));
        };
        double x0 = a, g0 = g(a);
        for (double x1 = a + step; x1 <= b; x1 += step) {
            const double g1 = g(x1);
            if (std::isfinite(g0) && std::isfinite(g1) && (g0 < 0) != (g1 < 0)) {
                double lo = x0, hi = x1, glo = g0;
                for (int it = 0; it < 80; ++it) {
                    const double mid = 0.5 * (lo + hi), gm = g(mid);
                    if ((gm < 0) == (glo < 0)) lo = mid, glo = gm;
                    else hi = mid;
                }
                const double r = 0.5 * (lo + hi);
                const bool singular = on_pole(1.0, r) && on_pole(4.0, r);
                if (singular) {
                    const double exact = std::round(r * 4) / 4;
                    if (roots.empty() || !roots.back().singular || std::abs(roots.back().lambda - exact) > 1e-9)
                        roots.push_back({exact, true});
                } else if (std::abs(g(r)) < 1e-6 * (1 + r)) {
                    roots.push_back({r, false});
                }
            }
            x0 = x1;
            g0 = g1;
        }
    }
    std::sort(roots.begin(), roots.end(), [](const BranchRoot& p, const BranchRoot& q) { return p.lambda < q.lambda; });
    return roots;
}

}  // namespace oracle
