#include "warpite/weyl.hpp"

#include "warpite/errors.hpp"
#include "warpite/parallel.hpp"
#include "warpite/radial.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

namespace warpite {

namespace {

double integrate(const std::function<double(double)>& g, double a, double b) {
    double err = 0;
    const double v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(g, a, b, 15, 1e-13, &err);
    if (!(err <= 1e-10 * std::abs(v) + 1e-300)) fail(ErrorKind::IntegrationFailure, "Weyl quadrature did not converge");
    return v;
}

// Integral of the squared angular density over standard spherical coordinates of S^{d-1}.
double angular_density_squared(int d) {
    double v = 2 * std::numbers::pi;
    for (int m = 1; m <= d - 2; ++m) {
        // int_0^pi sin^{2m} = pi (2m)! / (4^m (m!)^2)
        double c = std::numbers::pi;
        for (int k = 1; k <= m; ++k) c *= (2.0 * k - 1) / (2.0 * k);
        v *= c;
    }
    return v;
}

}  // namespace

WeylConstant weyl_constant(const WarpedManifold& m) {
    const int d = m.dimension();
    const double half = 0.5 * d;
    const double omega = std::pow(std::numbers::pi, half) / boost::math::tgamma(half + 1);
    const double sphere = 2 * std::pow(std::numbers::pi, half) / boost::math::tgamma(half);
    const double scale = omega / std::pow(2 * std::numbers::pi, d);
    auto dens = [&](double r) { return std::pow(m.n(r), half) * std::pow(m.f(r), d - 1); };
    WeylConstant out;
    out.volume = sphere * integrate(dens, m.r_inner(), m.r_outer());
    out.value = scale * out.volume;
    auto lit = [&](double r) { return std::pow(m.n(r), half) * std::pow(m.f(r), 2 * (d - 1)); };
    out.literal_value = scale * angular_density_squared(d) * integrate(lit, m.r_inner(), m.r_outer());
    return out;
}

long long dirichlet_counting(const WarpedManifold& m, double lambda, int l_max, const Tolerances& tol) {
    if (!(lambda > 0)) fail(ErrorKind::InvalidInput, "lambda must be positive");
    long long total = 0;
    for (int l = 0;; ++l) {
        if (l > l_max) {
            std::ostringstream os;
            os << "Dirichlet modes up to l_max=" << l_max << " still have eigenvalues below " << lambda;
            fail(ErrorKind::TruncationUncertified, os.str());
        }
        const int c = dirichlet_count_mode(m, l, lambda, tol);
        if (c == 0) {
            // The mode floor grows with kappa; confirm on the next mode before stopping.
            if (l + 1 <= l_max && dirichlet_count_mode(m, l + 1, lambda, tol) != 0)
                fail(ErrorKind::TruncationUncertified, "mode counts are not monotone in l");
            return total;
        }
        total += c * mode_multiplicity(m.dimension(), l);
    }
}

JumpReport jump_analysis(const ManifoldPair& pair, const PoleEntry& pole, const std::vector<PoleEntry>& catalog,
                         int l_max, const Tolerances& tol, const std::vector<ITERecord>& ites) {
    JumpReport r;
    r.lambda0 = pole.lambda0;
    r.epsilon = pole.window > 0 ? pole.window : 1e-5 * pole.lambda0;
    r.m1 = pole.m1;
    r.m2 = pole.m2;
    r.overlap = pole.overlap;
    for (const auto& e : catalog) {
        if (&e == &pole || e.lambda0 == pole.lambda0) continue;
        if (std::abs(e.lambda0 - pole.lambda0) <= 2 * r.epsilon) {
            std::ostringstream os;
            os << "pole at " << e.lambda0 << " lies inside the jump window around " << pole.lambda0;
            fail(ErrorKind::PoleSpacing, os.str());
        }
    }
    r.delta_measured = count_negative(pair, pole.lambda0 + r.epsilon, l_max, tol).count -
                       count_negative(pair, pole.lambda0 - r.epsilon, l_max, tol).count;
    for (const auto& it : ites)
        if (it.kind == ITEKind::Regular && std::abs(it.lambda - pole.lambda0) <= r.epsilon)
            r.delta_crossings += it.crossing_delta;
    r.delta = r.delta_measured - r.delta_crossings;
    r.predicted = pair.gamma * (r.m2 - r.m1);
    r.consistent = r.overlap == 0 ? r.delta == r.predicted : std::llabs(r.delta - r.predicted) <= r.overlap;
    return r;
}

WeylReport verify_lower_bound(const ManifoldPair& pair, double alpha, const std::vector<double>& grid, int l_max,
                              const SearchOptions& opts, const Tolerances& tol) {
    if (grid.empty()) fail(ErrorKind::InvalidInput, "empty lambda grid");
    if (!(alpha > 0 && alpha < lowest_dirichlet(pair, tol)))
        fail(ErrorKind::InvalidInput, "alpha must lie in (0, lowest Dirichlet eigenvalue)");
    std::vector<double> lams = grid;
    std::sort(lams.begin(), lams.end());
    if (!(lams.front() > alpha)) fail(ErrorKind::InvalidInput, "grid points must exceed alpha");
    const double top = lams.back();

    WeylReport rep;
    rep.alpha = alpha;
    rep.v1 = weyl_constant(pair.m1);
    rep.v2 = weyl_constant(pair.m2);
    rep.predicted_slope = pair.gamma * (rep.v1.value - rep.v2.value);
    rep.ites = find_ites(pair, alpha, top, l_max, opts, tol);
    auto catalog = pole_catalog(pair, alpha, top, l_max, tol);
    assign_pole_windows(pair, catalog, tol, opts.window_rel);
    rep.jumps.resize(catalog.size());
    parallel_for(static_cast<int>(catalog.size()), opts.threads,
                 [&](int i) { rep.jumps[i] = jump_analysis(pair, catalog[i], catalog, l_max, tol, rep.ites); });
    rep.n_minus_alpha = count_negative(pair, alpha, l_max, tol).count;

    // Grid points inside a pole window move to its edge, where N_- is resolved.
    for (auto& x : lams)
        for (const auto& j : rep.jumps)
            if (std::abs(x - j.lambda0) < j.epsilon)
                x = j.lambda0 + j.epsilon <= top ? j.lambda0 + j.epsilon : j.lambda0 - j.epsilon;
    std::vector<long long> n_minus(lams.size());
    parallel_for(static_cast<int>(lams.size()), opts.threads,
                 [&](int i) { n_minus[i] = count_negative(pair, lams[i], l_max, tol).count; });

    rep.bound_holds = true;
    for (size_t g = 0; g < lams.size(); ++g) {
        WeylGridPoint p;
        p.lambda = lams[g];
        p.n_minus = n_minus[g];
        for (const auto& r : rep.ites) {
            if (r.lambda > p.lambda) continue;
            p.n_t += r.multiplicity;
            if (r.kind == ITEKind::Singular) p.n_singular += r.multiplicity;
            else p.n_zero += r.crossing_delta;
        }
        for (const auto& j : rep.jumps) {
            if (j.lambda0 > p.lambda) continue;
            p.pole_sum += pair.gamma * (j.m1 - j.m2);
            p.n_pole += j.delta;
        }
        p.bound = p.pole_sum - rep.n_minus_alpha;
        p.slack = p.n_t - p.bound;
        p.decomposition_ok = p.n_minus - rep.n_minus_alpha == p.n_zero + p.n_pole;
        p.crossing_bound_ok = p.n_zero + p.n_singular <= p.n_t;
        rep.bound_holds = rep.bound_holds && p.slack >= 0;
        rep.grid.push_back(p);
    }

    // Least squares N_T ~ A x^{d/2} + B x^{(d-1)/2}.
    const double h = 0.5 * pair.dimension();
    Eigen::MatrixXd X(rep.grid.size(), 2);
    Eigen::VectorXd y(rep.grid.size());
    for (size_t g = 0; g < rep.grid.size(); ++g) {
        X(g, 0) = std::pow(rep.grid[g].lambda, h);
        X(g, 1) = std::pow(rep.grid[g].lambda, h - 0.5);
        y(g) = static_cast<double>(rep.grid[g].n_t);
    }
    if (rep.grid.size() >= 2) {
        const Eigen::VectorXd coef = X.colPivHouseholderQr().solve(y);
        rep.fitted_slope = coef(0);
        rep.fitted_offset = coef(1);
    } else {
        rep.fitted_slope = y(0) / X(0, 0);
    }
    for (size_t g = 0; g < rep.grid.size(); ++g)
        rep.fitted_constant =
            std::max(rep.fitted_constant, std::abs(y(g) - rep.fitted_slope * X(g, 0)) / X(g, 1));
    return rep;
}

}  // namespace warpite
