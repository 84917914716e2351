#pragma once

#include "warpite/exact.hpp"

#include <optional>
#include <string>
#include <vector>

namespace warpite {

enum class DomainKind { Cap, Shell };

struct RadialDomain {
    DomainKind kind = DomainKind::Cap;
    ExactReal inner;  // zero for Cap
    ExactReal outer;

    static RadialDomain cap(ExactReal outer);
    static RadialDomain shell(ExactReal inner, ExactReal outer);
    int components() const { return kind == DomainKind::Cap ? 1 : 2; }
    bool operator==(const RadialDomain& o) const { return kind == o.kind && inner == o.inner && outer == o.outer; }
};

// dr^2 + f(r)^2 h_{S^{d-1}} on the radial domain, with refractive index n(r).
class WarpedManifold {
public:
    WarpedManifold(int dimension, RadialDomain domain, RationalPolynomial warp, RationalPolynomial index);

    int dimension() const { return d_; }
    const RadialDomain& domain() const { return domain_; }
    const RationalPolynomial& warp() const { return f_; }
    const RationalPolynomial& index() const { return n_; }
    bool is_cap() const { return domain_.kind == DomainKind::Cap; }
    int components() const { return domain_.components(); }

    double r_inner() const { return r0_; }
    double r_outer() const { return r1_; }
    // Components are ordered [inner, outer] for a shell, [outer] for a cap.
    ExactReal boundary_point(int component) const;
    double boundary_radius(int component) const;
    // +1 when the outward normal is +d/dr, -1 when it is -d/dr.
    int normal_sign(int component) const;

    double f(double r) const { return horner(fd_, r); }
    double df(double r) const { return horner(dfd_, r); }
    double n(double r) const { return horner(nd_, r); }
    const std::vector<double>& warp_coeffs() const { return fd_; }
    const std::vector<double>& index_coeffs() const { return nd_; }

    // d^j/dnu^j of the warp or index at a boundary component, exact when possible.
    std::optional<Rational> warp_jet_exact(int component, int order) const;
    std::optional<Rational> index_jet_exact(int component, int order) const;
    double warp_jet(int component, int order) const;
    double index_jet(int component, int order) const;

    // Sampled maximum of n(r) f(r)^2 over the radial interval (upper-biased).
    double max_n_f2() const { return max_nf2_; }
    double max_n() const { return max_n_; }

    std::string describe() const;

private:
    int d_;
    RadialDomain domain_;
    RationalPolynomial f_, n_;
    std::vector<double> fd_, dfd_, nd_;
    double r0_, r1_;
    double max_nf2_ = 0.0, max_n_ = 0.0;
};

enum class AssumptionCase { A21, A22, ZETA };
const char* case_name(AssumptionCase c);
AssumptionCase parse_case(const std::string& s);

struct ManifoldPair {
    WarpedManifold m1, m2;
    std::vector<double> zeta;    // one entry per boundary component
    AssumptionCase kase;          // validated case
    AssumptionCase base_case;     // A21 or A22; equals kase unless kase == ZETA
    int gamma;                    // +1 or -1

    int components() const { return m1.components(); }
    int dimension() const { return m1.dimension(); }
    // Order s of the weighting in B(lambda): 1 for A21, 2 for A22, 0 for ZETA.
    int weight_order() const;
    bool has_zeta() const { return kase == AssumptionCase::ZETA; }
};

ManifoldPair validate_pair(const WarpedManifold& m1, const WarpedManifold& m2, const std::vector<double>& zeta,
                           std::optional<AssumptionCase> requested = std::nullopt);

struct ModeEntry {
    int l;
    double kappa;
    long long mult;
    bool operator==(const ModeEntry& o) const { return l == o.l && kappa == o.kappa && mult == o.mult; }
};

struct ModeFamily {
    int dimension;
    std::vector<ModeEntry> entries;
};

ModeFamily mode_family(int d, int l_max);
double mode_kappa(int d, int l);
long long mode_multiplicity(int d, int l);

double boundary_wavenumber(const ManifoldPair& pair, int l, int component);
double boundary_wavenumber(const WarpedManifold& m, int l, int component);

}  // namespace warpite
