#include "warpite/dtn.hpp"

#include "warpite/errors.hpp"
#include "warpite/symbolic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace warpite {

double refine_pole(const WarpedManifold& m, int l, double lambda, const Tolerances& tol) {
    RadialSolver solver(m, l, tol);
    const PruferState s = solver.shoot_outward(lambda);
    const int j = std::max(1, static_cast<int>(std::lround(s.theta / std::numbers::pi)));
    const double target = j * std::numbers::pi;
    double half = std::max(4.0 * std::abs(s.theta - target) / s.theta_lambda, tol.pole_tolerance(lambda));
    for (int k = 0; k < 40; ++k, half *= 2) {
        const double lo = lambda - half, hi = lambda + half;
        if (solver.shoot_outward(lo).theta < target && solver.shoot_outward(hi).theta >= target)
            return solver.eigenvalue(j, lo, hi);
    }
    fail(ErrorKind::BracketExhaustion, "could not bracket the pole near lambda");
}

namespace {

Eigen::MatrixXd raw_difference(const ManifoldPair& pair, double lambda, int l, const Tolerances& tol) {
    Eigen::MatrixXd d = dtn_mode(pair.m1, lambda, l, tol).value() - dtn_mode(pair.m2, lambda, l, tol).value();
    for (int c = 0; c < pair.components(); ++c) d(c, c) -= pair.zeta[c];
    return d;
}

}  // namespace

DifferenceSample difference_mode(const ManifoldPair& pair, double lambda, int l, const Tolerances& tol) {
    DifferenceSample out;
    out.lambda = lambda;
    out.l = l;
    const DtnModeSample a = dtn_mode(pair.m1, lambda, l, tol);
    const DtnModeSample b = dtn_mode(pair.m2, lambda, l, tol);
    out.pole_m1 = a.is_pole;
    out.pole_m2 = b.is_pole;
    if (!a.is_pole && !b.is_pole) {
        out.diff_matrix = a.matrix - b.matrix;
        for (int c = 0; c < pair.components(); ++c) out.diff_matrix(c, c) -= pair.zeta[c];
        return out;
    }
    double lambda0 = 0;
    int poles = 0;
    if (a.is_pole) lambda0 += refine_pole(pair.m1, l, lambda, tol), ++poles;
    if (b.is_pole) lambda0 += refine_pole(pair.m2, l, lambda, tol), ++poles;
    lambda0 /= poles;
    out.lambda = lambda0;
    out.regularized = true;
    out.diff_matrix = laurent_regular_part([&](double x) { return raw_difference(pair, x, l, tol); }, lambda0);
    return out;
}

Eigen::VectorXd mu_weights(const ManifoldPair& pair, int l) {
    const int c = pair.components();
    const int s = pair.weight_order();
    const double kappa = mode_kappa(pair.dimension(), l);
    Eigen::VectorXd w(c);
    for (int i = 0; i < c; ++i) {
        const double fb = pair.m1.f(pair.m1.boundary_radius(i));
        w(i) = std::pow(1.0 + kappa / (fb * fb), 0.5 * (1 + s));
    }
    return w;
}

std::vector<double> mu_from_matrix(const ManifoldPair& pair, int l, const Eigen::MatrixXd& diff) {
    const Eigen::VectorXd sw = mu_weights(pair, l).cwiseSqrt();
    Eigen::MatrixXd b = pair.gamma * (sw.asDiagonal() * diff * sw.asDiagonal());
    b = 0.5 * (b + b.transpose());
    std::vector<double> out;
    if (b.rows() == 1) {
        out.push_back(b(0, 0));
    } else {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b, Eigen::EigenvaluesOnly);
        for (int i = 0; i < b.rows(); ++i) out.push_back(es.eigenvalues()(i));
    }
    std::sort(out.begin(), out.end());
    return out;
}

MuSample mu_mode(const ManifoldPair& pair, double lambda, int l, const Tolerances& tol) {
    MuSample out;
    out.lambda = lambda;
    out.l = l;
    out.order_s = pair.weight_order();
    out.values = mu_from_matrix(pair, l, raw_difference(pair, lambda, l, tol));
    return out;
}

NegativeCount count_negative(const ManifoldPair& pair, double lambda, int l_max, const Tolerances& tol) {
    NegativeCount out;
    for (int l = 0; l <= l_max; ++l) {
        const MuSample mu = mu_mode(pair, lambda, l, tol);
        const int neg = static_cast<int>(std::count_if(mu.values.begin(), mu.values.end(), [](double v) { return v < 0; }));
        if (neg == 0 && tail_certifies(pair, lambda, l)) {
            out.l_star = l;
            return out;
        }
        if (neg > 0) {
            out.count += neg * mode_multiplicity(pair.dimension(), l);
            out.negatives.emplace_back(l, neg);
        }
    }
    std::ostringstream os;
    os << "no certified mode up to l_max=" << l_max << " at lambda=" << lambda;
    fail(ErrorKind::TruncationUncertified, os.str());
}

std::vector<std::vector<DirichletEigenRecord>> mode_spectra(const WarpedManifold& m, double b, int l_max,
                                                            const Tolerances& tol) {
    std::vector<std::vector<DirichletEigenRecord>> out;
    for (int l = 0;; ++l) {
        if (mode_kappa(m.dimension(), l) > std::max(0.0, b) * m.max_n_f2()) return out;
        if (l > l_max) {
            std::ostringstream os;
            os << "Dirichlet modes beyond l_max=" << l_max << " may carry eigenvalues below " << b;
            fail(ErrorKind::TruncationUncertified, os.str());
        }
        out.push_back(dirichlet_spectrum_mode(m, l, b, tol));
    }
}

std::vector<PoleEntry> pole_catalog(const ManifoldPair& pair, double a, double b, int l_max, const Tolerances& tol) {
    struct Raw {
        double lambda0;
        int which;
        const DirichletEigenRecord* rec;
    };
    // A pole sitting on the right end belongs to (a, b]; widen slightly so rounding cannot drop it.
    const double top = b + 10 * tol.pole_tolerance(b);
    const auto s1 = mode_spectra(pair.m1, top, l_max, tol);
    const auto s2 = mode_spectra(pair.m2, top, l_max, tol);
    std::vector<Raw> raw;
    for (const auto& mode : s1)
        for (const auto& r : mode)
            if (r.lambda0 > a && r.lambda0 <= top) raw.push_back({r.lambda0, 1, &r});
    for (const auto& mode : s2)
        for (const auto& r : mode)
            if (r.lambda0 > a && r.lambda0 <= top) raw.push_back({r.lambda0, 2, &r});
    std::sort(raw.begin(), raw.end(), [](const Raw& x, const Raw& y) { return x.lambda0 < y.lambda0; });

    std::vector<PoleEntry> out;
    for (size_t i = 0; i < raw.size();) {
        size_t j = i + 1;
        while (j < raw.size() && raw[j].lambda0 - raw[i].lambda0 <= tol.degeneracy_tolerance(raw[i].lambda0)) ++j;
        PoleEntry e;
        double sum = 0;
        for (size_t k = i; k < j; ++k) {
            const auto& r = *raw[k].rec;
            sum += r.lambda0;
            auto it = std::find_if(e.modes.begin(), e.modes.end(), [&](const PoleMode& pm) { return pm.l == r.l; });
            if (it == e.modes.end()) {
                e.modes.push_back({});
                it = e.modes.end() - 1;
                it->l = r.l;
                it->mult = r.mult_geometric;
            }
            if (raw[k].which == 1) {
                it->in_m1 = true;
                it->lambda_m1 = r.lambda0;
                it->data_m1 = r.boundary_data;
                e.m1 += r.mult_geometric;
            } else {
                it->in_m2 = true;
                it->lambda_m2 = r.lambda0;
                it->data_m2 = r.boundary_data;
                e.m2 += r.mult_geometric;
            }
        }
        e.lambda0 = sum / static_cast<double>(j - i);
        for (auto& pm : e.modes) {
            if (!(pm.in_m1 && pm.in_m2)) continue;
            // Rank-one residues in one mode share their range exactly when the boundary data are parallel.
            if (pm.data_m1.size() == 1) {
                pm.overlap = true;
            } else {
                const double cross = pm.data_m1[0] * pm.data_m2[1] - pm.data_m1[1] * pm.data_m2[0];
                const double n1 = std::hypot(pm.data_m1[0], pm.data_m1[1]);
                const double n2 = std::hypot(pm.data_m2[0], pm.data_m2[1]);
                pm.overlap = std::abs(cross) <= 1e-6 * n1 * n2;
            }
            if (pm.overlap) e.overlap += pm.mult;
        }
        std::sort(e.modes.begin(), e.modes.end(), [](const PoleMode& x, const PoleMode& y) { return x.l < y.l; });
        out.push_back(std::move(e));
        i = j;
    }
    return out;
}

void assign_pole_windows(const ManifoldPair& pair, std::vector<PoleEntry>& catalog, const Tolerances& tol,
                         double eps_rel) {
    Tolerances fine = tol;
    fine.ode_rel = tol.ode_rel * 1e-3;
    for (size_t i = 0; i < catalog.size(); ++i) {
        auto& e = catalog[i];
        double gap = INFINITY;
        if (i > 0) gap = std::min(gap, e.lambda0 - catalog[i - 1].lambda0);
        if (i + 1 < catalog.size()) gap = std::min(gap, catalog[i + 1].lambda0 - e.lambda0);
        double eps = std::min(eps_rel * e.lambda0, 0.25 * gap);
        for (;; eps *= 4) {
            if (2 * eps >= gap) {
                std::ostringstream os;
                os << "pole at " << e.lambda0 << " cannot be resolved before reaching a neighbouring pole";
                fail(ErrorKind::PoleSpacing, os.str());
            }
            bool ok = true;
            for (const auto& pm : e.modes) {
                for (double side : {-1.0, 1.0}) {
                    const auto c = mu_mode(pair, e.lambda0 + side * eps, pm.l, tol).values;
                    const auto f = mu_mode(pair, e.lambda0 + side * eps, pm.l, fine).values;
                    for (size_t k = 0; k < c.size() && ok; ++k) ok = std::abs(c[k] - f[k]) <= 0.1 * std::abs(f[k]);
                    if (!ok) break;
                }
                if (!ok) break;
            }
            if (ok) break;
        }
        e.window = eps;
    }
}

}  // namespace warpite
