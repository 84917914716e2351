#include "warpite/manifold.hpp"

#include "warpite/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace warpite {

namespace {

constexpr int kPositivitySamples = 4096;

int sign_of(double v) { return (v > 0) - (v < 0); }

// Sign of p at x, exact when the value is rational.
int exact_sign(const RationalPolynomial& p, const ExactReal& x) {
    if (p.vanishes_at(x)) return 0;
    if (auto q = p.exact_at(x)) return *q > 0 ? 1 : -1;
    double v = p.eval(x.value());
    if (v == 0.0) fail(ErrorKind::AssumptionViolation, "cannot decide sign of a value indistinguishable from zero");
    return sign_of(v);
}

}  // namespace

RadialDomain RadialDomain::cap(ExactReal outer) { return {DomainKind::Cap, ExactReal{0, false}, outer}; }
RadialDomain RadialDomain::shell(ExactReal inner, ExactReal outer) { return {DomainKind::Shell, inner, outer}; }

WarpedManifold::WarpedManifold(int dimension, RadialDomain domain, RationalPolynomial warp, RationalPolynomial index)
    : d_(dimension), domain_(std::move(domain)), f_(std::move(warp)), n_(std::move(index)) {
    if (d_ < 2) fail(ErrorKind::InvalidInput, "dimension must be at least 2");
    if (domain_.kind == DomainKind::Cap) domain_.inner = ExactReal{0, false};
    r0_ = domain_.inner.value();
    r1_ = domain_.outer.value();
    if (!(r1_ > r0_)) fail(ErrorKind::InvalidInput, "radial interval is empty");
    fd_ = f_.coeffs_double();
    dfd_ = f_.derivative().coeffs_double();
    nd_ = n_.coeffs_double();

    if (is_cap()) {
        if (f_.coeff(0) != 0 || f_.coeff(1) != 1)
            fail(ErrorKind::InvalidInput, "cap warp must satisfy f(0)=0 and f'(0)=1");
    } else {
        if (exact_sign(f_, domain_.inner) <= 0 || exact_sign(f_, domain_.outer) <= 0)
            fail(ErrorKind::InvalidInput, "shell warp must be positive at both boundary radii");
    }
    if (exact_sign(n_, domain_.inner) <= 0 || exact_sign(n_, domain_.outer) <= 0)
        fail(ErrorKind::InvalidInput, "index must be positive on the closed radial interval");
    if (!is_cap() && f(r1_) <= 0) fail(ErrorKind::InvalidInput, "warp must be positive on the radial interval");
    for (int i = 0; i <= kPositivitySamples; ++i) {
        double r = r0_ + (r1_ - r0_) * i / kPositivitySamples;
        double fv = f(r), nv = n(r);
        if (nv <= 0) fail(ErrorKind::InvalidInput, "index must be positive on the closed radial interval");
        if (fv <= 0 && !(is_cap() && i == 0)) fail(ErrorKind::InvalidInput, "warp must be positive on the open radial interval");
        max_nf2_ = std::max(max_nf2_, nv * fv * fv);
        max_n_ = std::max(max_n_, nv);
    }
    // Sampling can miss the peak between nodes by a relative O(h^2) amount.
    max_nf2_ *= 1.001;
    max_n_ *= 1.001;
}

ExactReal WarpedManifold::boundary_point(int component) const {
    if (is_cap()) return domain_.outer;
    return component == 0 ? domain_.inner : domain_.outer;
}

double WarpedManifold::boundary_radius(int component) const { return boundary_point(component).value(); }

int WarpedManifold::normal_sign(int component) const { return (!is_cap() && component == 0) ? -1 : 1; }

std::optional<Rational> WarpedManifold::warp_jet_exact(int component, int order) const {
    auto v = f_.derivative(order).exact_at(boundary_point(component));
    if (v && normal_sign(component) < 0 && order % 2 == 1) *v = -*v;
    return v;
}

std::optional<Rational> WarpedManifold::index_jet_exact(int component, int order) const {
    auto v = n_.derivative(order).exact_at(boundary_point(component));
    if (v && normal_sign(component) < 0 && order % 2 == 1) *v = -*v;
    return v;
}

double WarpedManifold::warp_jet(int component, int order) const {
    double v = f_.derivative(order).eval(boundary_radius(component));
    return (normal_sign(component) < 0 && order % 2 == 1) ? -v : v;
}

double WarpedManifold::index_jet(int component, int order) const {
    double v = n_.derivative(order).eval(boundary_radius(component));
    return (normal_sign(component) < 0 && order % 2 == 1) ? -v : v;
}

std::string WarpedManifold::describe() const {
    std::ostringstream os;
    os << "d=" << d_ << (is_cap() ? " cap [0, " : " shell [") << (is_cap() ? "" : domain_.inner.str() + ", ")
       << domain_.outer.str() << "] f=" << f_.str() << " n=" << n_.str();
    return os.str();
}

const char* case_name(AssumptionCase c) {
    switch (c) {
        case AssumptionCase::A21: return "A21";
        case AssumptionCase::A22: return "A22";
        case AssumptionCase::ZETA: return "ZETA";
    }
    return "?";
}

AssumptionCase parse_case(const std::string& s) {
    if (s == "A21") return AssumptionCase::A21;
    if (s == "A22") return AssumptionCase::A22;
    if (s == "ZETA") return AssumptionCase::ZETA;
    fail(ErrorKind::InvalidInput, "unknown assumption case '" + s + "'");
}

int ManifoldPair::weight_order() const {
    switch (kase) {
        case AssumptionCase::A21: return 1;
        case AssumptionCase::A22: return 2;
        case AssumptionCase::ZETA: return 0;
    }
    return 0;
}

ManifoldPair validate_pair(const WarpedManifold& m1, const WarpedManifold& m2, const std::vector<double>& zeta,
                           std::optional<AssumptionCase> requested) {
    if (m1.dimension() != m2.dimension()) fail(ErrorKind::MismatchedBoundary, "manifolds have different dimensions");
    if (!(m1.domain() == m2.domain()))
        fail(ErrorKind::MismatchedBoundary, "manifolds do not share boundary radii and structure");
    const int c = m1.components();
    if (static_cast<int>(zeta.size()) != c)
        fail(ErrorKind::MismatchedBoundary,
             "zeta needs " + std::to_string(c) + " component(s), got " + std::to_string(zeta.size()));

    const RationalPolynomial df = m1.warp() - m2.warp();
    const RationalPolynomial dn = m1.index() - m2.index();
    auto warp_matches = [&](int order) {
        for (int comp = 0; comp < c; ++comp)
            for (int j = 0; j <= order; ++j)
                if (!df.derivative(j).vanishes_at(m1.boundary_point(comp))) return false;
        return true;
    };
    if (!warp_matches(2))
        fail(ErrorKind::MismatchedBoundary, "warp functions disagree at the boundary up to order 2");

    // A21: n1 != n2 on every component with a constant sign of n2 - n1.
    std::string a21_reason, a22_reason;
    std::optional<int> gamma21;
    {
        int s0 = 0;
        bool ok = true;
        for (int comp = 0; comp < c && ok; ++comp) {
            int s = -exact_sign(dn, m1.boundary_point(comp));
            if (s == 0) {
                ok = false;
                a21_reason = "n1 = n2 at boundary component " + std::to_string(comp);
            } else if (s0 != 0 && s != s0) {
                ok = false;
                a21_reason = "sign of n2 - n1 changes across boundary components";
            }
            s0 = s;
        }
        if (ok) gamma21 = s0;
    }
    // A22: n1 = n2, d_nu n1 != d_nu n2 with constant sign, warp matched to order 3.
    std::optional<int> gamma22;
    {
        int s0 = 0;
        bool ok = true;
        const RationalPolynomial ddn = dn.derivative();
        for (int comp = 0; comp < c && ok; ++comp) {
            ExactReal b = m1.boundary_point(comp);
            if (!dn.vanishes_at(b)) {
                ok = false;
                a22_reason = "n1 != n2 at boundary component " + std::to_string(comp);
                break;
            }
            int s = exact_sign(ddn, b) * m1.normal_sign(comp);
            if (s == 0) {
                ok = false;
                a22_reason = "normal derivatives of n agree at boundary component " + std::to_string(comp);
            } else if (s0 != 0 && s != s0) {
                ok = false;
                a22_reason = "sign of d_nu n1 - d_nu n2 changes across boundary components";
            }
            s0 = s;
        }
        if (ok && !warp_matches(3)) {
            ok = false;
            a22_reason = "warp functions disagree at the boundary at order 3";
        }
        if (ok) gamma22 = s0;
    }

    std::optional<AssumptionCase> base;
    int gamma0 = 0;
    if (gamma21) {
        base = AssumptionCase::A21;
        gamma0 = *gamma21;
    } else if (gamma22) {
        base = AssumptionCase::A22;
        gamma0 = *gamma22;
    }

    int nonzero = 0, zsign = 0;
    bool mixed = false;
    for (double z : zeta) {
        if (!std::isfinite(z)) fail(ErrorKind::InvalidInput, "zeta must be finite");
        if (z != 0) {
            int s = sign_of(z);
            if (zsign != 0 && s != zsign) mixed = true;
            zsign = s;
            ++nonzero;
        }
    }
    const bool has_zeta = nonzero > 0;
    if (has_zeta && (mixed || nonzero != c))
        fail(ErrorKind::AssumptionViolation, "zeta sign condition violated: zeta must be nonzero with one sign on every boundary component");

    if (!base) {
        fail(ErrorKind::AssumptionViolation,
             "neither the A21 nor the A22 condition holds: " + a21_reason + "; " + a22_reason);
    }

    if (requested) {
        if (has_zeta && *requested != AssumptionCase::ZETA)
            fail(ErrorKind::AmbiguousCase, std::string("case ") + case_name(*requested) +
                                               " requested but zeta is nonzero; the zeta case determines gamma");
        if (!has_zeta && *requested == AssumptionCase::ZETA)
            fail(ErrorKind::AssumptionViolation, "case ZETA requested but zeta vanishes");
        if (!has_zeta && *requested != *base)
            fail(ErrorKind::AssumptionViolation, std::string("requested case ") + case_name(*requested) + " does not hold: " +
                                                     (*requested == AssumptionCase::A21 ? a21_reason : a22_reason));
    }

    AssumptionCase kase = has_zeta ? AssumptionCase::ZETA : *base;
    int gamma = has_zeta ? -zsign : gamma0;
    return ManifoldPair{m1, m2, zeta, kase, *base, gamma};
}

double mode_kappa(int d, int l) { return static_cast<double>(l) * (l + d - 2); }

long long mode_multiplicity(int d, int l) {
    if (l == 0) return 1;
    if (d == 2) return 2;
    // binom(l+d-3, l) * (2l+d-2) / (d-2)
    long double b = 1;
    for (int i = 1; i <= d - 3; ++i) b = b * (l + i) / i;
    long long binom = std::llround(b);
    return binom * (2LL * l + d - 2) / (d - 2);
}

ModeFamily mode_family(int d, int l_max) {
    if (d < 2) fail(ErrorKind::InvalidInput, "dimension must be at least 2");
    if (l_max < 0) fail(ErrorKind::InvalidInput, "l_max must be nonnegative");
    ModeFamily fam{d, {}};
    for (int l = 0; l <= l_max; ++l) fam.entries.push_back({l, mode_kappa(d, l), mode_multiplicity(d, l)});
    return fam;
}

double boundary_wavenumber(const WarpedManifold& m, int l, int component) {
    if (component < 0 || component >= m.components()) fail(ErrorKind::InvalidInput, "invalid boundary component");
    return std::sqrt(mode_kappa(m.dimension(), l)) / m.f(m.boundary_radius(component));
}

double boundary_wavenumber(const ManifoldPair& pair, int l, int component) {
    return boundary_wavenumber(pair.m1, l, component);
}

}  // namespace warpite
