#include "warpite/radial.hpp"

#include "warpite/errors.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

namespace warpite {

namespace odeint = boost::numeric::odeint;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kMaxSeriesTerms = 400;
constexpr double kSeriesTail = 1e-17;
constexpr double kSeriesCancellation = 1e3;
constexpr double kCapFloor = 1e-6;
constexpr std::size_t kMaxSteps = 2'000'000;

double ipow(double x, int k) {
    if (k < 0) return 1.0 / ipow(x, -k);
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= x;
    return r;
}

struct StepGuard {
    std::size_t* count;
    template <class S>
    void operator()(const S& s, double) const {
        if (++*count > kMaxSteps) fail(ErrorKind::IntegrationFailure, "radial integration exceeded the step budget");
        for (double v : s)
            if (!std::isfinite(v)) fail(ErrorKind::IntegrationFailure, "radial integration produced a non-finite value");
    }
};

// Frobenius expansion at the cap: v = r^l sum a_k r^k for the equation multiplied by r^2,
// r^2 v'' + P(r) r v' + Q(r) v = 0, P = (d-1) r f'/f, Q = -kappa (r/f)^2 + lambda n r^2.
template <class T>
class CapFrobenius {
public:
    CapFrobenius(const WarpedManifold& m, int l, double kappa, T lambda)
        : d_(m.dimension()), l_(l), kappa_(kappa), lambda_(lambda), nc_(m.index_coeffs()) {
        const auto& fc = m.warp_coeffs();
        for (std::size_t i = 1; i < fc.size(); ++i) g_.push_back(fc[i]);
        extend(0);
    }

    struct Sums {
        T s{}, t{}, sl{}, tl{};  // S, T = sum (l+k) a_k r^k, and their lambda derivatives
        bool ok = false;
    };

    // Sums at radius r, or ok=false if the series has not settled within the budget.
    Sums evaluate(double r) {
        Sums out;
        double ms = 0, mt = 0, msl = 0, mtl = 0;
        double rk = 1.0;
        int quiet = 0;
        for (int k = 0; k < kMaxSeriesTerms; ++k) {
            extend(k);
            T ts = a_[k] * rk, tt = ts * double(l_ + k);
            T tsl = al_[k] * rk, ttl = tsl * double(l_ + k);
            out.s += ts;
            out.t += tt;
            out.sl += tsl;
            out.tl += ttl;
            ms = std::max(ms, std::abs(ts));
            mt = std::max(mt, std::abs(tt));
            msl = std::max(msl, std::abs(tsl));
            mtl = std::max(mtl, std::abs(ttl));
            bool small = std::abs(ts) <= kSeriesTail * std::abs(out.s) && std::abs(tt) <= kSeriesTail * std::abs(out.t) &&
                         std::abs(tsl) <= kSeriesTail * std::abs(out.sl) &&
                         std::abs(ttl) <= kSeriesTail * std::abs(out.tl);
            quiet = (small && k > 2) ? quiet + 1 : 0;
            if (quiet >= 3) {
                auto settled = [](double mx, T sum) {
                    return mx == 0.0 || (std::abs(sum) > 0 && mx <= kSeriesCancellation * std::abs(sum));
                };
                // T vanishes identically at l=0 when the series is even and r->0; tolerate via its magnitude.
                out.ok = settled(ms, out.s) && settled(mt, out.t) && settled(msl, out.sl) && settled(mtl, out.tl);
                return out;
            }
            rk *= r;
            if (!std::isfinite(rk) || !std::isfinite(std::abs(out.s))) return out;
        }
        return out;
    }

private:
    void extend(int k) {
        while (static_cast<int>(a_.size()) <= k) {
            const int K = static_cast<int>(a_.size());
            const int dg = static_cast<int>(g_.size()) - 1;
            // 1/g, P and (1/g)^2 coefficients at index K
            double igk = (K == 0) ? 1.0 : 0.0;
            double pk = (K == 0) ? double(d_ - 1) : 0.0;
            for (int i = 1; i <= std::min(K, dg); ++i) {
                igk -= g_[i] * ig_[K - i];
            }
            ig_.push_back(igk);
            for (int i = 1; i <= std::min(K, dg); ++i) pk += (d_ - 1) * i * g_[i] * ig_[K - i];
            P_.push_back(pk);
            double ig2 = 0;
            for (int i = 0; i <= K; ++i) ig2 += ig_[i] * ig_[K - i];
            IG2_.push_back(ig2);
            N2_.push_back((K >= 2 && K - 2 < static_cast<int>(nc_.size())) ? nc_[K - 2] : 0.0);

            if (K == 0) {
                a_.push_back(T(1.0));
                al_.push_back(T(0.0));
                continue;
            }
            T sa{}, sal{};
            for (int j = 1; j <= K; ++j) {
                T qj = -kappa_ * IG2_[j] + lambda_ * N2_[j];
                T coef = P_[j] * double(K - j + l_) + qj;
                sa += a_[K - j] * coef;
                sal += al_[K - j] * coef + a_[K - j] * N2_[j];
            }
            double denom = double(K) * double(K + 2 * l_ + d_ - 2);
            a_.push_back(-sa / denom);
            al_.push_back(-sal / denom);
        }
    }

    int d_, l_;
    double kappa_;
    T lambda_;
    const std::vector<double>& nc_;
    std::vector<double> g_, ig_, P_, IG2_, N2_;
    std::vector<T> a_, al_;
};

}  // namespace

const Eigen::MatrixXd& DtnModeSample::value() const {
    if (is_pole) {
        std::ostringstream os;
        os << "lambda=" << lambda << " is within pole tolerance of a mode-" << l << " Dirichlet eigenvalue";
        fail(ErrorKind::PoleProximity, os.str());
    }
    return matrix;
}

RadialSolver::RadialSolver(const WarpedManifold& m, int l, Tolerances tol)
    : m_(m), l_(l), d_(m.dimension()), kappa_(mode_kappa(m.dimension(), l)), tol_(tol) {
    if (l < 0) fail(ErrorKind::InvalidInput, "mode index must be nonnegative");
}

double RadialSolver::p(double r) const { return ipow(m_.f(r), d_ - 1); }
double RadialSolver::q(double r) const { return kappa_ * ipow(m_.f(r), d_ - 3); }
double RadialSolver::w(double r) const { return m_.n(r) * p(r); }

PruferState RadialSolver::integrate(double r_from, double r_to, PruferState s, double lambda) const {
    if (r_from == r_to) return s;
    using State = std::array<double, 3>;
    const int d = d_;
    const double kappa = kappa_;
    auto rhs = [&](const State& x, State& dx, double r) {
        const double fr = m_.f(r);
        const double pr = ipow(fr, d - 1);
        const double ip = 1.0 / pr;
        const double qr = kappa * ipow(fr, d - 3);
        const double wr = m_.n(r) * pr;
        const double sn = std::sin(x[0]), cs = std::cos(x[0]);
        const double g = lambda * wr - qr;
        dx[0] = cs * cs * ip + g * sn * sn;
        dx[1] = sn * cs * (ip - g);
        dx[2] = 2.0 * sn * cs * (g - ip) * x[2] + wr * sn * sn;
    };
    State x{s.theta, s.log_rho, s.theta_lambda};
    auto stepper = odeint::make_controlled(tol_.ode_rel, tol_.ode_rel, odeint::runge_kutta_fehlberg78<State>());
    std::size_t steps = 0;
    const double dt0 = (r_to - r_from) * 1e-3;
    try {
        odeint::integrate_adaptive(stepper, rhs, x, r_from, r_to, dt0, StepGuard{&steps});
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        fail(ErrorKind::IntegrationFailure, std::string("radial integration failed: ") + e.what());
    }
    return {x[0], x[1], x[2]};
}

PruferState RadialSolver::shoot_outward(double lambda) const {
    const double R = m_.r_outer();
    if (!m_.is_cap()) return integrate(m_.r_inner(), R, PruferState{0.0, 0.0, 0.0}, lambda);

    CapFrobenius<double> series(m_, l_, kappa_, lambda);
    double r0 = R;
    typename CapFrobenius<double>::Sums sums;
    for (;;) {
        sums = series.evaluate(r0);
        if (sums.ok) break;
        if (r0 <= kCapFloor * R) fail(ErrorKind::IntegrationFailure, "cap series did not settle at the start radius");
        r0 = std::max(r0 * 0.5, kCapFloor * R);
    }
    // Unwrap the phase along (0, r0] so theta(r0) carries the zero count of v on (0, r0).
    const double wave = std::sqrt(std::max(0.0, lambda) * m_.max_n());
    const int samples = 16 + static_cast<int>(std::ceil(8.0 * r0 * wave / kPi));
    double theta = 0;
    for (int i = 1; i <= samples; ++i) {
        const double r = r0 * i / samples;
        auto s = (i == samples) ? sums : series.evaluate(r);
        if (!s.ok && i < samples) continue;
        const double pr = p(r);
        double th = std::atan2(r * s.s, pr * s.t);
        if (i == 1) {
            if (th < 0) th += 2 * kPi;
        } else {
            th += 2 * kPi * std::round((theta - th) / (2 * kPi));
        }
        theta = th;
    }
    const double pr0 = p(r0);
    const double vs = r0 * sums.s, us = pr0 * sums.t;
    const double norm2 = vs * vs + us * us;
    PruferState st;
    st.theta = theta;
    st.log_rho = (l_ - 1) * std::log(r0) + 0.5 * std::log(norm2);
    st.theta_lambda = (r0 * sums.sl * us - vs * pr0 * sums.tl) / norm2;
    return integrate(r0, R, st, lambda);
}

PruferState RadialSolver::shoot_inward(double lambda) const {
    if (m_.is_cap()) fail(ErrorKind::InvalidInput, "inward shooting needs a shell");
    return integrate(m_.r_outer(), m_.r_inner(), PruferState{kPi, 0.0, 0.0}, lambda);
}

int RadialSolver::count(double lambda) const {
    const PruferState s = shoot_outward(lambda);
    const int k = static_cast<int>(std::floor(s.theta / kPi));
    // An eigenvalue within pole tolerance above lambda is treated as sitting at lambda.
    if (((k + 1) * kPi - s.theta) / s.theta_lambda <= tol_.pole_tolerance(lambda)) return k + 1;
    return k;
}

double RadialSolver::pole_distance(double lambda) const {
    const PruferState s = shoot_outward(lambda);
    double k = std::round(s.theta / kPi);
    if (k < 1) k = 1;
    return std::abs(s.theta - k * kPi) / s.theta_lambda;
}

DtnModeSample RadialSolver::dtn(double lambda) const {
    DtnModeSample out;
    out.lambda = lambda;
    out.l = l_;
    const PruferState a = shoot_outward(lambda);
    double k = std::max(1.0, std::round(a.theta / kPi));
    out.pole_distance = std::abs(a.theta - k * kPi) / a.theta_lambda;
    out.is_pole = out.pole_distance <= tol_.pole_tolerance(lambda);
    if (out.is_pole) return out;
    const double R = m_.r_outer();
    if (m_.is_cap()) {
        out.matrix.resize(1, 1);
        out.matrix(0, 0) = 1.0 / (std::tan(a.theta) * p(R));
        return out;
    }
    const double r0 = m_.r_inner();
    const PruferState b = shoot_inward(lambda);
    const double pa = p(r0), pb = p(R);
    out.matrix.resize(2, 2);
    out.matrix(0, 0) = -1.0 / (std::tan(b.theta) * pa);
    out.matrix(1, 1) = 1.0 / (std::tan(a.theta) * pb);
    // Off-diagonal entries in the orthonormal mode basis; the two estimates agree by the Wronskian identity.
    const double off_a = -std::exp(-a.log_rho) / (std::sqrt(pa * pb) * std::sin(a.theta));
    const double off_b = -std::exp(-b.log_rho) / (std::sqrt(pa * pb) * std::sin(b.theta));
    out.matrix(0, 1) = out.matrix(1, 0) = 0.5 * (off_a + off_b);
    return out;
}

DtnModeSampleComplex RadialSolver::dtn(std::complex<double> lambda) const {
    DtnModeSampleComplex out;
    out.lambda = lambda;
    out.l = l_;
    if (lambda.imag() == 0.0) {
        out.matrix = dtn(lambda.real()).value().cast<std::complex<double>>();
        return out;
    }
    using State = std::array<double, 4>;
    using C = std::complex<double>;
    auto run = [&](double r_from, double r_to, C v, C u) {
        auto rhs = [&](const State& x, State& dx, double r) {
            const double fr = m_.f(r);
            const double pr = ipow(fr, d_ - 1);
            const C vv(x[0], x[1]), uu(x[2], x[3]);
            const C dv = uu / pr;
            const C du = (kappa_ * ipow(fr, d_ - 3) - lambda * m_.n(r) * pr) * vv;
            dx = {dv.real(), dv.imag(), du.real(), du.imag()};
        };
        State x{v.real(), v.imag(), u.real(), u.imag()};
        if (r_from != r_to) {
            auto stepper = odeint::make_controlled(tol_.ode_rel, tol_.ode_rel, odeint::runge_kutta_fehlberg78<State>());
            std::size_t steps = 0;
            try {
                odeint::integrate_adaptive(stepper, rhs, x, r_from, r_to, (r_to - r_from) * 1e-3, StepGuard{&steps});
            } catch (const Error&) {
                throw;
            } catch (const std::exception& e) {
                fail(ErrorKind::IntegrationFailure, std::string("radial integration failed: ") + e.what());
            }
        }
        return std::pair<C, C>{C(x[0], x[1]), C(x[2], x[3])};
    };
    const double R = m_.r_outer();
    if (m_.is_cap()) {
        CapFrobenius<C> series(m_, l_, kappa_, lambda);
        double r0 = R;
        typename CapFrobenius<C>::Sums sums;
        for (;;) {
            sums = series.evaluate(r0);
            if (sums.ok) break;
            if (r0 <= kCapFloor * R) fail(ErrorKind::IntegrationFailure, "cap series did not settle at the start radius");
            r0 = std::max(r0 * 0.5, kCapFloor * R);
        }
        auto [v, u] = run(r0, R, r0 * sums.s, p(r0) * sums.t);
        out.matrix.resize(1, 1);
        out.matrix(0, 0) = u / (p(R) * v);
        return out;
    }
    const double a = m_.r_inner();
    const double pa = p(a), pb = p(R);
    auto [va, ua] = run(a, R, C(0), C(1));
    auto [vb, ub] = run(R, a, C(0), C(-1));
    out.matrix.resize(2, 2);
    out.matrix(0, 0) = -ub / (pa * vb);
    out.matrix(1, 1) = ua / (pb * va);
    const C off_a = -1.0 / (std::sqrt(pa * pb) * va);
    const C off_b = -1.0 / (std::sqrt(pa * pb) * vb);
    out.matrix(0, 1) = out.matrix(1, 0) = 0.5 * (off_a + off_b);
    return out;
}

double RadialSolver::eigenvalue(int j, double lo, double hi) const {
    const double target = j * kPi;
    double x = 0.5 * (lo + hi);
    double dx_prev = hi - lo;
    for (int iter = 0; iter < 200; ++iter) {
        const PruferState s = shoot_outward(x);
        const double g = s.theta - target;
        if (g < 0) lo = x;
        else hi = x;
        double step = g / s.theta_lambda;
        double xn = x - step;
        if (!(xn > lo && xn < hi)) {
            xn = 0.5 * (lo + hi);
            step = x - xn;
        }
        const double scale = std::max(1.0, std::abs(x));
        const double dx = std::abs(step);
        x = xn;
        if (dx <= 1e-3 * tol_.root_rel * scale) return x;
        if (iter >= 3 && dx <= tol_.root_rel * scale && dx > 0.25 * dx_prev) return x;
        if (hi - lo <= 1e-3 * tol_.root_rel * scale) return 0.5 * (lo + hi);
        dx_prev = dx;
    }
    fail(ErrorKind::BracketExhaustion, "eigenvalue refinement did not converge");
}

std::vector<double> RadialSolver::boundary_data(double lambda0) const {
    const PruferState a = shoot_outward(lambda0);
    const double k = std::max(1.0, std::round(a.theta / kPi));
    const double dist = std::abs(a.theta - k * kPi) / a.theta_lambda;
    if (dist > 10 * tol_.root_rel * std::max(1.0, lambda0)) {
        std::ostringstream os;
        os << "lambda0=" << lambda0 << " is not a mode-" << l_ << " Dirichlet eigenvalue (distance " << dist << ")";
        fail(ErrorKind::NotAnEigenvalue, os.str());
    }
    const double R = m_.r_outer();
    const double sq = std::sqrt(a.theta_lambda);
    std::vector<double> data;
    if (m_.is_cap()) {
        data = {std::cos(a.theta) / (p(R) * sq)};
    } else {
        const double r0 = m_.r_inner();
        data = {-std::exp(-a.log_rho) / (p(r0) * sq), std::cos(a.theta) / (p(R) * sq)};
    }
    for (double v : data) {
        if (v != 0.0) {
            if (v < 0)
                for (double& x : data) x = -x;
            break;
        }
    }
    return data;
}

std::vector<DirichletEigenRecord> RadialSolver::spectrum(double lambda_max) const {
    std::vector<DirichletEigenRecord> out;
    if (!(lambda_max > 0)) return out;
    const int n = count(lambda_max);
    if (n == 0) return out;
    // Phase table on a grid uniform in sqrt(lambda) supplies brackets and starting points.
    const int grid = 2 * n + 4;
    std::vector<double> lam(grid + 1), th(grid + 1);
    for (int i = 0; i <= grid; ++i) {
        const double s = std::sqrt(lambda_max) * i / grid;
        lam[i] = s * s;
        th[i] = shoot_outward(lam[i]).theta;
    }
    const long long mult = mode_multiplicity(d_, l_);
    for (int j = 1; j <= n; ++j) {
        const double target = j * kPi;
        double lo = 0, hi = lambda_max + 2 * tol_.pole_tolerance(lambda_max);
        for (int i = 0; i <= grid; ++i) {
            if (th[i] < target) lo = std::max(lo, lam[i]);
            else hi = std::min(hi, lam[i]);
        }
        if (!(lo < hi)) fail(ErrorKind::BracketExhaustion, "phase table is not monotone; tighten ode_rel");
        const double x = eigenvalue(j, lo, hi);
        if (!(x > 0)) continue;
        DirichletEigenRecord rec;
        rec.lambda0 = x;
        rec.l = l_;
        rec.j = j;
        rec.boundary_data = boundary_data(x);
        rec.mult_geometric = mult;
        out.push_back(std::move(rec));
    }
    return out;
}

DtnModeSample dtn_mode(const WarpedManifold& m, double lambda, int l, const Tolerances& tol) {
    return RadialSolver(m, l, tol).dtn(lambda);
}

DtnModeSampleComplex dtn_mode(const WarpedManifold& m, std::complex<double> lambda, int l, const Tolerances& tol) {
    return RadialSolver(m, l, tol).dtn(lambda);
}

std::vector<DirichletEigenRecord> dirichlet_spectrum_mode(const WarpedManifold& m, int l, double lambda_max,
                                                          const Tolerances& tol) {
    return RadialSolver(m, l, tol).spectrum(lambda_max);
}

ResidueMatrix residue_mode(const WarpedManifold& m, const DirichletEigenRecord& rec) {
    const int c = m.components();
    Eigen::VectorXd w(c);
    for (int i = 0; i < c; ++i) {
        const double fb = m.f(m.boundary_radius(i));
        w(i) = rec.boundary_data.at(i) * std::pow(fb, 0.5 * (m.dimension() - 1));
    }
    return {rec.lambda0, rec.l, -w * w.transpose()};
}

std::vector<double> eigen_boundary_data(const WarpedManifold& m, int l, double lambda0, const Tolerances& tol) {
    return RadialSolver(m, l, tol).boundary_data(lambda0);
}

int dirichlet_count_mode(const WarpedManifold& m, int l, double lambda, const Tolerances& tol) {
    return RadialSolver(m, l, tol).count(lambda);
}

}  // namespace warpite
