#pragma once

#include "warpite/manifold.hpp"
#include "warpite/symbolic_algebra.hpp"

#include <complex>
#include <map>
#include <string>
#include <vector>

namespace warpite {

// Symbol names used by the engine: rho = |xi'|, lam = lambda, d = dimension,
// f<j> / n<j> = j-th normal derivative of warp / index at the boundary,
// K = |xi'|^2 and a radical name sigma with sigma^2 = K - lam*n0 in parameter form.
enum class Decay { Plain, Parameter };

// coeff * y^a * exp(-sigma y); the coefficient carries its |xi'| (or radical) powers and b records
// the order in |xi'|^{-1}, so a + b is the generalized degree of the slot.
struct SymbolTerm {
    sym::RatFunc coeff;
    int a = 0;
    int b = 0;
    Decay decay = Decay::Plain;
    std::string sigma = "rho";
};

// sum_a coeffs[a] * y^a * exp(-sigma y); coefficients still carry their sigma/rho powers.
struct SymbolLevel {
    std::map<int, sym::Poly> coeffs;

    bool is_zero() const;
};

struct BoundaryJets {
    std::vector<sym::Poly> f;  // f[0..]
    std::vector<sym::Poly> n;  // n[0..]
    sym::Poly d;
};

struct SymbolSeries {
    Decay decay = Decay::Plain;
    std::string sigma = "rho";
    sym::Relations relations;          // radical relation in parameter form
    std::vector<SymbolLevel> levels;   // E_0 .. E_N
    std::vector<std::vector<std::tuple<sym::Poly, int, int>>> operators;  // per m: (coeff, y power, derivative order)

    // Canonical terms of level m, sorted by (a, b).
    std::vector<SymbolTerm> terms(int m) const;
    // Level-m contribution to the D-N symbol, -d/dy E_m at y = 0.
    sym::Poly dn_symbol(int m) const;
};

constexpr int kMaxSymbolOrder = 6;

BoundaryJets generic_jets(int order, const std::string& f_prefix = "f", const std::string& n_prefix = "n");
// Exact boundary jets of one manifold at one component; fails if a jet is not rational.
BoundaryJets manifold_jets(const WarpedManifold& m, int component, int order);

// Solves (-d^2/dy^2 + sigma^2) v = rhs with v(0) = 0 and decay at infinity.
SymbolLevel solve_model_ode(const SymbolLevel& rhs, const sym::Poly& sigma);
// Applies sum coeff * y^p * d^q to a level with decay sigma.
SymbolLevel apply_operator(const std::vector<std::tuple<sym::Poly, int, int>>& op, const SymbolLevel& level,
                           const sym::Poly& sigma);

SymbolSeries symbol_recursion(const BoundaryJets& jets, int N);
SymbolSeries parameter_recursion(const BoundaryJets& jets, int N, const std::string& sigma_name);

// Residual of the defining equation at level m (identically zero for a correct series).
SymbolLevel recursion_residual(const SymbolSeries& s, int m);
// Exact check of the generalized-degree scaling (y, xi') -> (y/t, t xi') of level m.
bool check_homogeneity(const SymbolSeries& s, int m);

struct DifferenceSymbol {
    SymbolTerm term;       // first nonvanishing level of -d/dy (E_1 - E_2) at y = 0
    int level = 0;
    sym::RatFunc closed_form;   // closed form expected for the case
    bool matches_closed_form = false;
};

// Generic markers: A21 uses n1_0, n2_0; A22 uses n1_1, n2_1 (normal derivatives of the indices).
DifferenceSymbol difference_principal_symbol(AssumptionCase kase);
// Exact jets of a validated pair at one boundary component.
DifferenceSymbol difference_principal_symbol(const ManifoldPair& pair, int component = 0);

struct ParameterSymbol {
    SymbolTerm term;             // raw difference divided by lam, in the radicals s1, s2 (or s); b is the order
    sym::RatFunc closed_form;    // rationalized closed form
    sym::Relations relations;
    bool matches_closed_form = false;
    bool zero_limit_matches = false;  // lam -> 0 reproduces the plain principal symbol over lam
    std::complex<double> value;       // numeric value at the requested lambda and xi'
};

// Numeric markers: values for n1_0, n2_0 (A21) or n0, n1_1, n2_1 (A22), plus "rho" for |xi'|.
ParameterSymbol parameter_principal_symbol(AssumptionCase kase, std::complex<double> lambda,
                                           const sym::NumericEnv& markers);
ParameterSymbol parameter_principal_symbol(const ManifoldPair& pair, std::complex<double> lambda, double xi,
                                           int component = 0);

struct TailPrediction {
    double lead = 0;   // leading difference-symbol term (minus zeta in the zeta case)
    double next = 0;   // next-order term
    double value = 0;  // lead + next
};

// Per boundary component predictions of the diagonal of m1 - m2 - zeta at mode l.
std::vector<TailPrediction> tail_predict(const ManifoldPair& pair, double lambda, int l);
// True when the symbolic tail certifies gamma * mu > 0 for this and all larger modes.
bool tail_certifies(const ManifoldPair& pair, double lambda, int l);

}  // namespace warpite
