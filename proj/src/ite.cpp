#include "warpite/ite.hpp"

#include "warpite/errors.hpp"
#include "warpite/parallel.hpp"
#include "warpite/radial.hpp"
#include "warpite/symbolic.hpp"

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace warpite {

const char* ite_kind_name(ITEKind k) { return k == ITEKind::Regular ? "regular" : "singular"; }

namespace {

struct ModeRoot {
    double lambda;
    int index;      // which sorted mu curve
    int delta;      // +1 when the curve turns negative
    double residual;
    bool ambiguous;
};

class ModeScanner {
public:
    ModeScanner(const ManifoldPair& pair, int l, const Tolerances& tol) : pair_(pair), l_(l), tol_(tol) {}

    std::vector<double> mu(double x) const {
        Eigen::MatrixXd d = dtn_mode(pair_.m1, x, l_, tol_).value() - dtn_mode(pair_.m2, x, l_, tol_).value();
        for (int c = 0; c < pair_.components(); ++c) d(c, c) -= pair_.zeta[c];
        return mu_from_matrix(pair_, l_, d);
    }
    double mu_i(double x, int i) const { return mu(x)[i]; }

    double refine(int i, double lo, double hi) const {
        boost::uintmax_t iters = 200;
        const double eps = 1e-2 * tol_.root_rel * std::max(1.0, std::abs(hi));
        auto stop = [eps](double x, double y) { return std::abs(y - x) <= eps; };
        auto r = boost::math::tools::toms748_solve([&](double x) { return mu_i(x, i); }, lo, hi, stop, iters);
        if (iters >= 200) fail(ErrorKind::RootRefinementFailure, "mu zero refinement did not converge");
        return 0.5 * (r.first + r.second);
    }

    // Scans [lo + lo_off, hi - hi_off]; the offsets keep samples outside pole windows.
    void scan_gap(double lo, double hi, double lo_off, double hi_off, int divisions, std::vector<ModeRoot>& out) const {
        const double L = lo + lo_off;
        const double U = hi - hi_off;
        if (!(U > L)) return;
        std::vector<double> xs(divisions + 1);
        std::vector<std::vector<double>> ms(divisions + 1);
        for (int k = 0; k <= divisions; ++k) {
            xs[k] = L + (U - L) * k / divisions;
            ms[k] = mu(xs[k]);
        }
        const int c = static_cast<int>(ms[0].size());
        for (int i = 0; i < c; ++i) {
            for (int k = 0; k < divisions; ++k) {
                const double y0 = ms[k][i], y1 = ms[k + 1][i];
                if (y0 == 0.0) {
                    if (k == 0) out.push_back({xs[0], i, y1 < 0 ? 1 : -1, 0.0, false});
                    continue;
                }
                if ((y0 > 0) != (y1 > 0) && y1 != 0.0) {
                    const double x = refine(i, xs[k], xs[k + 1]);
                    out.push_back({x, i, y0 > 0 ? 1 : -1, std::abs(mu_i(x, i)), false});
                } else if (y1 == 0.0) {
                    const double y2 = k + 2 <= divisions ? ms[k + 2][i] : y0;
                    out.push_back({xs[k + 1], i, (y0 > 0 && y2 < 0) ? 1 : ((y0 < 0 && y2 > 0) ? -1 : 0), 0.0,
                                   (y0 > 0) == (y2 > 0)});
                }
            }
            // Local dips of |mu| that may hide a double crossing or a tangential touch.
            for (int k = 1; k < divisions; ++k) {
                const double a = ms[k - 1][i], b = ms[k][i], e = ms[k + 1][i];
                if (!((a > 0) == (b > 0) && (b > 0) == (e > 0)) || b == 0.0) continue;
                if (!(std::abs(b) <= std::abs(a) && std::abs(b) <= std::abs(e))) continue;
                const double h = xs[k] - xs[k - 1];
                const double curv = (a - 2 * b + e) / (h * h);
                const double slope = (e - a) / (2 * h);
                const double vertex = curv != 0.0 ? b - slope * slope / (2 * curv) : b;
                const double sgn = b > 0 ? 1.0 : -1.0;
                if (sgn * vertex > 0.5 * std::abs(b)) continue;
                auto g = [&](double x) { return sgn * mu_i(x, i); };
                const auto mn = boost::math::tools::brent_find_minima(g, xs[k - 1], xs[k + 1], 40);
                const double zero_tol = 1e-8 * std::max(1.0, std::abs(xs[k]));
                if (mn.second < 0) {
                    const double r1 = refine(i, xs[k - 1], mn.first);
                    const double r2 = refine(i, mn.first, xs[k + 1]);
                    out.push_back({r1, i, sgn > 0 ? 1 : -1, std::abs(mu_i(r1, i)), false});
                    out.push_back({r2, i, sgn > 0 ? -1 : 1, std::abs(mu_i(r2, i)), false});
                } else if (mn.second <= zero_tol) {
                    out.push_back({mn.first, i, 0, mn.second, true});
                }
            }
        }
    }

private:
    const ManifoldPair& pair_;
    int l_;
    const Tolerances& tol_;
};

struct ModePole {
    double lambda0;
    double window;
    std::vector<std::vector<double>> data;  // boundary data of each manifold with a pole here
};

std::vector<ITERecord> scan_mode(const ManifoldPair& pair, int l, double a, double b,
                                 const std::vector<ModePole>& poles, const SearchOptions& opts,
                                 const Tolerances& tol) {
    const ModeScanner scanner(pair, l, tol);
    std::vector<ModeRoot> roots;
    double lo = a, lo_off = 0;
    for (size_t k = 0; k <= poles.size(); ++k) {
        const bool last = k == poles.size();
        const double hi = last ? b : poles[k].lambda0;
        const double hi_off = last ? 0 : poles[k].window;
        if (hi > lo) scanner.scan_gap(lo, hi, lo_off, hi_off, opts.scan_divisions, roots);
        if (last) break;
        lo = hi;
        lo_off = poles[k].window;
    }

    const long long mult = mode_multiplicity(pair.dimension(), l);
    std::sort(roots.begin(), roots.end(), [](const ModeRoot& x, const ModeRoot& y) { return x.lambda < y.lambda; });
    std::vector<ITERecord> out;
    for (const auto& r : roots) {
        if (!(r.lambda > a && r.lambda <= b)) continue;
        if (!out.empty() && r.lambda - out.back().lambda <= tol.degeneracy_tolerance(r.lambda)) {
            auto& e = out.back();
            e.multiplicity += mult;
            e.crossing_delta += r.delta * mult;
            e.residual = std::max(e.residual, r.residual);
            e.ambiguous = e.ambiguous || r.ambiguous;
            continue;
        }
        ITERecord e;
        e.lambda = r.lambda;
        e.kind = ITEKind::Regular;
        e.modes = {l};
        e.multiplicity = mult;
        e.residual = r.residual;
        e.ambiguous = r.ambiguous;
        e.crossing_delta = r.delta * mult;
        out.push_back(e);
    }

    // Kernel at a pole: data f orthogonal to every residue range with f.H f = 0 for the regular part H.
    // A single component has no such f.
    if (pair.components() == 2) {
        for (const auto& p : poles) {
            Eigen::Vector2d u(p.data[0][0], p.data[0][1]);
            u.normalize();
            bool parallel = true;
            for (size_t j = 1; j < p.data.size(); ++j) {
                Eigen::Vector2d v(p.data[j][0], p.data[j][1]);
                if (std::abs(u(0) * v(1) - u(1) * v(0)) > 1e-6 * v.norm()) parallel = false;
            }
            if (!parallel) continue;
            const Eigen::Vector2d f(-u(1), u(0));
            const DifferenceSample h = difference_mode(pair, p.lambda0, l, tol);
            const double value = f.dot(h.diff_matrix * f);
            if (std::abs(value) > 1e-6 * std::max(1.0, h.diff_matrix.norm())) continue;
            auto side = [&](double x) {
                return pair.gamma * f.dot(difference_mode(pair, x, l, tol).diff_matrix * f);
            };
            const double below = side(p.lambda0 - p.window), above = side(p.lambda0 + p.window);
            ITERecord e;
            e.lambda = p.lambda0;
            e.modes = {l};
            e.multiplicity = mult;
            e.residual = std::abs(value);
            e.at_pole = true;
            e.crossing_delta = ((above < 0) - (below < 0)) * mult;
            out.push_back(e);
        }
        std::sort(out.begin(), out.end(), [](const ITERecord& x, const ITERecord& y) { return x.lambda < y.lambda; });
    }
    return out;
}

std::vector<ITERecord> merge_records(std::vector<ITERecord> all, const Tolerances& tol) {
    std::stable_sort(all.begin(), all.end(), [](const ITERecord& x, const ITERecord& y) {
        if (x.kind != y.kind) return x.kind < y.kind;
        return x.lambda < y.lambda;
    });
    std::vector<ITERecord> out;
    for (auto& r : all) {
        if (!out.empty() && out.back().kind == r.kind && out.back().at_pole == r.at_pole &&
            r.lambda - out.back().lambda <= tol.degeneracy_tolerance(r.lambda)) {
            auto& e = out.back();
            e.multiplicity += r.multiplicity;
            e.crossing_delta += r.crossing_delta;
            e.residual = std::max(e.residual, r.residual);
            e.ambiguous = e.ambiguous || r.ambiguous;
            for (int l : r.modes)
                if (std::find(e.modes.begin(), e.modes.end(), l) == e.modes.end()) e.modes.push_back(l);
            std::sort(e.modes.begin(), e.modes.end());
            continue;
        }
        out.push_back(std::move(r));
    }
    std::stable_sort(out.begin(), out.end(), [](const ITERecord& x, const ITERecord& y) { return x.lambda < y.lambda; });
    return out;
}

}  // namespace

int certified_mode(const ManifoldPair& pair, double a, double b, int l_max, const Tolerances& tol) {
    constexpr int kPoints = 9;
    for (int l = 1; l <= l_max; ++l) {
        bool ok = true;
        for (int k = 0; k < kPoints && ok; ++k) {
            const double x = a + (b - a) * k / (kPoints - 1);
            ok = tail_certifies(pair, x, l);
        }
        for (int k = 0; k < kPoints && ok; ++k) {
            const double x = a + (b - a) * k / (kPoints - 1);
            ok = mu_mode(pair, x, l, tol).values.front() > 0;
        }
        if (ok) return l;
    }
    std::ostringstream os;
    os << "no mode up to l_max=" << l_max << " has a certified positive tail on [" << a << ", " << b << "]";
    fail(ErrorKind::TruncationUncertified, os.str());
}

std::vector<ITERecord> find_regular_ites(const ManifoldPair& pair, double a, double b, int l_max,
                                         const SearchOptions& opts, const Tolerances& tol) {
    if (!(b > a)) fail(ErrorKind::InvalidInput, "ITE search needs a < b");
    if (opts.scan_divisions < 2) fail(ErrorKind::InvalidInput, "scan_divisions must be at least 2");
    const int lc = certified_mode(pair, a, b, l_max, tol);
    auto catalog = pole_catalog(pair, a, b, l_max, tol);
    assign_pole_windows(pair, catalog, tol, opts.window_rel);
    std::vector<std::vector<ModePole>> mode_poles(lc);
    for (const auto& e : catalog) {
        for (const auto& pm : e.modes) {
            if (pm.l >= lc) continue;
            ModePole mp{e.lambda0, e.window, {}};
            if (pm.in_m1) mp.data.push_back(pm.data_m1);
            if (pm.in_m2) mp.data.push_back(pm.data_m2);
            mode_poles[pm.l].push_back(std::move(mp));
        }
    }
    std::vector<std::vector<ITERecord>> per_mode(lc);
    parallel_for(lc, opts.threads,
                 [&](int l) { per_mode[l] = scan_mode(pair, l, a, b, mode_poles[l], opts, tol); });
    std::vector<ITERecord> all;
    for (auto& v : per_mode) all.insert(all.end(), v.begin(), v.end());
    return merge_records(std::move(all), tol);
}

std::vector<ITERecord> find_singular_ites(const ManifoldPair& pair, double a, double b, int l_max,
                                          const Tolerances& tol) {
    std::vector<ITERecord> out;
    for (const auto& e : pole_catalog(pair, a, b, l_max, tol)) {
        if (e.overlap == 0) continue;
        ITERecord r;
        r.lambda = e.lambda0;
        r.kind = ITEKind::Singular;
        r.multiplicity = e.overlap;
        for (const auto& pm : e.modes) {
            if (!pm.overlap) continue;
            r.modes.push_back(pm.l);
            r.residual = std::max(r.residual, std::abs(pm.lambda_m1 - pm.lambda_m2));
        }
        out.push_back(r);
    }
    return out;
}

std::vector<ITERecord> find_ites(const ManifoldPair& pair, double a, double b, int l_max, const SearchOptions& opts,
                                 const Tolerances& tol) {
    auto reg = find_regular_ites(pair, a, b, l_max, opts, tol);
    auto sing = find_singular_ites(pair, a, b, l_max, tol);
    reg.insert(reg.end(), sing.begin(), sing.end());
    std::stable_sort(reg.begin(), reg.end(), [](const ITERecord& x, const ITERecord& y) { return x.lambda < y.lambda; });
    return reg;
}

double lowest_dirichlet(const ManifoldPair& pair, const Tolerances& tol) {
    double best = INFINITY;
    for (const auto* m : {&pair.m1, &pair.m2}) {
        // The lowest eigenvalue sits in mode 0 since the mode potential grows with kappa.
        double top = 1.0;
        std::vector<DirichletEigenRecord> s;
        for (int k = 0; k < 200 && s.empty(); ++k, top *= 2) s = dirichlet_spectrum_mode(*m, 0, top, tol);
        if (s.empty()) fail(ErrorKind::BracketExhaustion, "no Dirichlet eigenvalue found in mode 0");
        best = std::min(best, s.front().lambda0);
    }
    return best;
}

long long counting_function(const std::vector<ITERecord>& ites, double lambda) {
    long long n = 0;
    for (const auto& r : ites)
        if (r.lambda <= lambda) n += r.multiplicity;
    return n;
}

long long counting_function(const ManifoldPair& pair, double alpha, double lambda, int l_max,
                            const SearchOptions& opts, const Tolerances& tol) {
    if (!(alpha > 0)) fail(ErrorKind::InvalidInput, "alpha must be positive");
    if (!(alpha < lowest_dirichlet(pair, tol)))
        fail(ErrorKind::InvalidInput, "alpha must lie below the Dirichlet spectra of both manifolds");
    if (!(lambda > alpha)) return 0;
    return counting_function(find_ites(pair, alpha, lambda, l_max, opts, tol), lambda);
}

}  // namespace warpite
