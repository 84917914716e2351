#include "warpite/symbolic.hpp"

#include "warpite/errors.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

namespace warpite {

using sym::Poly;
using sym::RatFunc;

namespace {

using Operator = std::vector<std::tuple<Poly, int, int>>;

Rational factorial(int k) {
    Rational r = 1;
    for (int i = 2; i <= k; ++i) r *= i;
    return r;
}

Poly sign_pow(int j) { return Poly((j % 2) ? -1L : 1L); }

struct TaylorData {
    std::vector<Poly> c, G, N;  // c(y) = -(d-1) F'/F, G = F(0)^2/F^2, N = index Taylor series
};

TaylorData taylor(const BoundaryJets& jets, int order) {
    const int nf = order + 1;
    if (static_cast<int>(jets.f.size()) < nf + 1) fail(ErrorKind::InvalidInput, "not enough warp jets for the order");
    std::vector<Poly> F(nf + 1);
    for (int j = 0; j <= nf; ++j) F[j] = (jets.f[j] * sign_pow(j)).scaled(Rational(1) / factorial(j));
    if (!F[0].is_monomial()) fail(ErrorKind::InvalidInput, "boundary warp value must be a monomial symbol or a constant");
    const Poly inv0 = F[0].pow(-1);
    std::vector<Poly> IF(nf + 1);
    IF[0] = inv0;
    for (int k = 1; k <= nf; ++k) {
        Poly s;
        for (int i = 1; i <= k; ++i) s += F[i] * IF[k - i];
        IF[k] = -(inv0 * s);
    }
    TaylorData t;
    const Poly dm1 = jets.d - Poly(1L);
    for (int j = 0; j < nf; ++j) {
        Poly s;
        for (int i = 0; i <= j; ++i) s += F[i + 1].scaled(i + 1) * IF[j - i];
        t.c.push_back(-(dm1 * s));
    }
    const Poly f02 = F[0] * F[0];
    for (int j = 0; j <= order; ++j) {
        Poly s;
        for (int i = 0; i <= j; ++i) s += IF[i] * IF[j - i];
        t.G.push_back(f02 * s);
    }
    for (int j = 0; j <= order; ++j) {
        Poly nj = j < static_cast<int>(jets.n.size()) ? jets.n[j] : Poly(0L);
        t.N.push_back((nj * sign_pow(j)).scaled(Rational(1) / factorial(j)));
    }
    return t;
}

SymbolLevel add_levels(const SymbolLevel& a, const SymbolLevel& b) {
    SymbolLevel r = a;
    for (const auto& [k, c] : b.coeffs) {
        r.coeffs[k] += c;
        if (r.coeffs[k].is_zero()) r.coeffs.erase(k);
    }
    return r;
}

SymbolLevel negate(const SymbolLevel& a) {
    SymbolLevel r;
    for (const auto& [k, c] : a.coeffs) r.coeffs[k] = -c;
    return r;
}

SymbolLevel reduced(const SymbolLevel& a, const sym::Relations& rel) {
    if (rel.empty()) return a;
    SymbolLevel r;
    for (const auto& [k, c] : a.coeffs) {
        Poly p = sym::reduce(c, rel);
        if (!p.is_zero()) r.coeffs[k] = p;
    }
    return r;
}

SymbolSeries run_recursion(Decay decay, const std::string& sigma_name, const BoundaryJets& jets, int N) {
    if (N < 0 || N > kMaxSymbolOrder)
        fail(ErrorKind::UnsupportedOrder, "symbol recursion supports orders 0.." + std::to_string(kMaxSymbolOrder));
    const TaylorData td = taylor(jets, N);
    const Poly lam = Poly::var("lam");
    SymbolSeries s;
    s.decay = decay;
    s.sigma = sigma_name;
    const Poly sigma = Poly::var(sigma_name);
    Poly K;
    if (decay == Decay::Plain) {
        K = Poly::var("rho", 2);
        s.operators.push_back({{Poly(-1L), 0, 2}, {K, 0, 0}});
    } else {
        K = Poly::var("K");
        const Poly sq = K - lam * td.N[0];
        s.relations.push_back({sigma_name, sq});
        s.operators.push_back({{Poly(-1L), 0, 2}, {sq, 0, 0}});
    }
    for (int m = 1; m <= N; ++m) {
        Operator op;
        op.emplace_back(K * td.G[m], m, 0);
        op.emplace_back(td.c[m - 1], m - 1, 1);
        if (decay == Decay::Plain) {
            if (m >= 2) op.emplace_back(-(lam * td.N[m - 2]), m - 2, 0);
        } else {
            op.emplace_back(-(lam * td.N[m]), m, 0);
        }
        s.operators.push_back(std::move(op));
    }
    SymbolLevel e0;
    e0.coeffs[0] = Poly(1L);
    s.levels.push_back(e0);
    for (int m = 1; m <= N; ++m) {
        SymbolLevel rhs;
        for (int k = 1; k <= m; ++k) rhs = add_levels(rhs, apply_operator(s.operators[k], s.levels[m - k], sigma));
        s.levels.push_back(reduced(solve_model_ode(reduced(negate(rhs), s.relations), sigma), s.relations));
    }
    return s;
}

RatFunc subs(const RatFunc& r, const std::string& var, const Poly& value) {
    return RatFunc(r.num().subs(var, value), r.den().subs(var, value));
}

const std::vector<Poly>& generic_dn_levels() {
    static std::once_flag once;
    static std::vector<Poly> levels;
    std::call_once(once, [] {
        const SymbolSeries s = symbol_recursion(generic_jets(5), 4);
        for (int m = 0; m <= 4; ++m) levels.push_back(s.dn_symbol(m));
    });
    return levels;
}

sym::NumericEnv jet_env(const WarpedManifold& m, int component, double lambda, double rho) {
    sym::NumericEnv env;
    for (int j = 0; j <= 5; ++j) env["f" + std::to_string(j)] = m.warp_jet(component, j);
    for (int j = 0; j <= 5; ++j) env["n" + std::to_string(j)] = m.index_jet(component, j);
    env["d"] = m.dimension();
    env["lam"] = lambda;
    env["rho"] = rho;
    return env;
}

}  // namespace

bool SymbolLevel::is_zero() const {
    for (const auto& kv : coeffs)
        if (!kv.second.is_zero()) return false;
    return true;
}

std::vector<SymbolTerm> SymbolSeries::terms(int m) const {
    std::vector<SymbolTerm> out;
    for (const auto& [a, c] : levels.at(m).coeffs) {
        if (c.is_zero()) continue;
        out.push_back({RatFunc(c), a, m - a, decay, sigma});
    }
    return out;
}

Poly SymbolSeries::dn_symbol(int m) const {
    const auto& lv = levels.at(m).coeffs;
    Poly c0 = lv.count(0) ? lv.at(0) : Poly(0L);
    Poly c1 = lv.count(1) ? lv.at(1) : Poly(0L);
    Poly r = Poly::var(sigma) * c0 - c1;
    return relations.empty() ? r : sym::reduce(r, relations);
}

BoundaryJets generic_jets(int order, const std::string& f_prefix, const std::string& n_prefix) {
    BoundaryJets j;
    for (int k = 0; k <= order + 1; ++k) j.f.push_back(Poly::var(f_prefix + std::to_string(k)));
    for (int k = 0; k <= order; ++k) j.n.push_back(Poly::var(n_prefix + std::to_string(k)));
    j.d = Poly::var("d");
    return j;
}

BoundaryJets manifold_jets(const WarpedManifold& m, int component, int order) {
    BoundaryJets j;
    for (int k = 0; k <= order + 1; ++k) {
        auto v = m.warp_jet_exact(component, k);
        if (!v) fail(ErrorKind::InvalidInput, "warp jet at the boundary is not rational");
        j.f.push_back(Poly(*v));
    }
    for (int k = 0; k <= order; ++k) {
        auto v = m.index_jet_exact(component, k);
        if (!v) fail(ErrorKind::InvalidInput, "index jet at the boundary is not rational");
        j.n.push_back(Poly(*v));
    }
    j.d = Poly(static_cast<long>(m.dimension()));
    return j;
}

SymbolLevel solve_model_ode(const SymbolLevel& rhs, const Poly& sigma) {
    if (!sigma.is_monomial()) fail(ErrorKind::InvalidInput, "decay rate must be a single symbol");
    SymbolLevel v;
    for (const auto& [j, c] : rhs.coeffs) {
        if (j < 0) fail(ErrorKind::NonPolynomialRhs, "right-hand side has a negative power of y");
        if (c.is_zero()) continue;
        // y^j e^{-sy} -> sum_i j!/(j-i)! y^{j-i+1} / ((j-i+1) (2s)^{i+1})
        for (int i = 0; i <= j; ++i) {
            Rational k = factorial(j) / factorial(j - i) / Rational(j - i + 1);
            k /= Rational(boost::multiprecision::cpp_int(1) << (i + 1));
            v.coeffs[j - i + 1] += (c * sigma.pow(-(i + 1))).scaled(k);
        }
    }
    for (auto it = v.coeffs.begin(); it != v.coeffs.end();)
        it = it->second.is_zero() ? v.coeffs.erase(it) : std::next(it);
    return v;
}

SymbolLevel apply_operator(const Operator& op, const SymbolLevel& level, const Poly& sigma) {
    SymbolLevel out;
    auto add = [&](int k, const Poly& c) {
        if (c.is_zero()) return;
        if (k < 0) fail(ErrorKind::NonPolynomialRhs, "operator produced a negative power of y");
        out.coeffs[k] += c;
    };
    for (const auto& [coef, p, q] : op) {
        for (const auto& [a, c] : level.coeffs) {
            const Poly base = coef * c;
            switch (q) {
                case 0: add(a + p, base); break;
                case 1:
                    if (a > 0) add(a - 1 + p, base.scaled(a));
                    add(a + p, -(base * sigma));
                    break;
                case 2:
                    if (a > 1) add(a - 2 + p, base.scaled(a * (a - 1)));
                    if (a > 0) add(a - 1 + p, -(base * sigma).scaled(2 * a));
                    add(a + p, base * sigma * sigma);
                    break;
                default: fail(ErrorKind::InvalidInput, "operator order above 2");
            }
        }
    }
    for (auto it = out.coeffs.begin(); it != out.coeffs.end();)
        it = it->second.is_zero() ? out.coeffs.erase(it) : std::next(it);
    return out;
}

SymbolSeries symbol_recursion(const BoundaryJets& jets, int N) { return run_recursion(Decay::Plain, "rho", jets, N); }

SymbolSeries parameter_recursion(const BoundaryJets& jets, int N, const std::string& sigma_name) {
    return run_recursion(Decay::Parameter, sigma_name, jets, N);
}

SymbolLevel recursion_residual(const SymbolSeries& s, int m) {
    const Poly sigma = Poly::var(s.sigma);
    SymbolLevel r;
    for (int k = 0; k <= m; ++k) r = add_levels(r, apply_operator(s.operators.at(k), s.levels.at(m - k), sigma));
    SymbolLevel out;
    for (const auto& [a, c] : r.coeffs)
        if (!sym::is_zero_mod(c, s.relations)) out.coeffs[a] = sym::reduce(c, s.relations);
    return out;
}

bool check_homogeneity(const SymbolSeries& s, int m) {
    const Poly t = Poly::var("t");
    for (const auto& [a, c] : s.levels.at(m).coeffs) {
        Poly scaled;
        if (s.decay == Decay::Plain) {
            scaled = c.subs("rho", t * Poly::var("rho"));
        } else {
            scaled = c.subs(s.sigma, t * Poly::var(s.sigma))
                         .subs("K", Poly::var("t", 2) * Poly::var("K"))
                         .subs("lam", Poly::var("t", 2) * Poly::var("lam"));
        }
        // y^a -> t^{-a} y^a while the exponential is invariant; the level must scale by t^{-m}.
        if (scaled * Poly::var("t", -a) != c * Poly::var("t", -m)) return false;
    }
    return true;
}

DifferenceSymbol difference_principal_symbol(AssumptionCase kase) {
    if (kase == AssumptionCase::ZETA)
        fail(ErrorKind::InvalidInput, "the index difference symbol needs the underlying A21 or A22 case");
    const int N = kase == AssumptionCase::A21 ? 2 : 3;
    BoundaryJets j1 = generic_jets(N), j2 = generic_jets(N);
    for (int k = 0; k <= N; ++k) {
        j1.n[k] = Poly::var("n1_" + std::to_string(k));
        j2.n[k] = Poly::var("n2_" + std::to_string(k));
    }
    if (kase == AssumptionCase::A22) j1.n[0] = j2.n[0] = Poly::var("n0");
    const SymbolSeries s1 = symbol_recursion(j1, N), s2 = symbol_recursion(j2, N);
    DifferenceSymbol out;
    const Poly lam = Poly::var("lam");
    for (int m = 0; m <= N; ++m) {
        Poly diff = s1.dn_symbol(m) - s2.dn_symbol(m);
        if (diff.is_zero()) continue;
        out.level = m;
        out.term = {RatFunc(diff), 0, m - 1, Decay::Plain, "rho"};
        break;
    }
    if (out.term.coeff.num().is_zero()) fail(ErrorKind::CancellationBeyondOrder, "difference symbol vanishes to the computed order");
    if (kase == AssumptionCase::A21) {
        out.closed_form = RatFunc((-(lam * (Poly::var("n1_0") - Poly::var("n2_0")))) * Poly::var("rho", -1))
                              .operator*(RatFunc(Poly(Rational(1, 2))));
    } else {
        out.closed_form = RatFunc(lam * (Poly::var("n1_1") - Poly::var("n2_1")) * Poly::var("rho", -2))
                              .operator*(RatFunc(Poly(Rational(1, 4))));
    }
    out.matches_closed_form = out.level == N && out.term.coeff.num() == out.closed_form.num() &&
                              out.term.coeff.den() == out.closed_form.den();
    return out;
}

DifferenceSymbol difference_principal_symbol(const ManifoldPair& pair, int component) {
    const BoundaryJets j1 = manifold_jets(pair.m1, component, kMaxSymbolOrder);
    const BoundaryJets j2 = manifold_jets(pair.m2, component, kMaxSymbolOrder);
    const SymbolSeries s1 = symbol_recursion(j1, kMaxSymbolOrder), s2 = symbol_recursion(j2, kMaxSymbolOrder);
    DifferenceSymbol out;
    bool found = false;
    for (int m = 0; m <= kMaxSymbolOrder && !found; ++m) {
        Poly diff = s1.dn_symbol(m) - s2.dn_symbol(m);
        if (diff.is_zero()) continue;
        out.level = m;
        out.term = {RatFunc(diff), 0, m - 1, Decay::Plain, "rho"};
        found = true;
    }
    if (!found)
        fail(ErrorKind::CancellationBeyondOrder,
             "all difference-symbol levels up to order " + std::to_string(kMaxSymbolOrder) + " cancel");
    const Poly lam = Poly::var("lam");
    if (pair.base_case == AssumptionCase::A21) {
        Rational dn = *pair.m1.index_jet_exact(component, 0) - *pair.m2.index_jet_exact(component, 0);
        out.closed_form = RatFunc((lam * Poly::var("rho", -1)).scaled(-dn / 2));
        out.matches_closed_form = out.level == 2 && out.term.coeff.equals(out.closed_form);
    } else {
        Rational dn = *pair.m1.index_jet_exact(component, 1) - *pair.m2.index_jet_exact(component, 1);
        out.closed_form = RatFunc((lam * Poly::var("rho", -2)).scaled(dn / 4));
        out.matches_closed_form = out.level == 3 && out.term.coeff.equals(out.closed_form);
    }
    return out;
}

ParameterSymbol parameter_principal_symbol(AssumptionCase kase, std::complex<double> lambda,
                                           const sym::NumericEnv& markers) {
    if (lambda.imag() == 0.0 && lambda.real() >= 0.0)
        fail(ErrorKind::BranchOnCut, "parameter symbols need lambda off the nonnegative real axis");
    if (kase == AssumptionCase::ZETA)
        fail(ErrorKind::InvalidInput, "the parameter symbol needs the underlying A21 or A22 case");
    const Poly lam = Poly::var("lam");
    const int N = kase == AssumptionCase::A21 ? 0 : 1;
    BoundaryJets j1 = generic_jets(N + 1), j2 = generic_jets(N + 1);
    for (int k = 0; k <= N + 1; ++k) {
        j1.n[k] = Poly::var("n1_" + std::to_string(k));
        j2.n[k] = Poly::var("n2_" + std::to_string(k));
    }
    std::string sig1 = "s1", sig2 = "s2";
    if (kase == AssumptionCase::A22) {
        j1.n[0] = j2.n[0] = Poly::var("n0");
        sig1 = sig2 = "s";
    }
    const SymbolSeries p1 = parameter_recursion(j1, N, sig1), p2 = parameter_recursion(j2, N, sig2);
    ParameterSymbol out;
    out.relations = p1.relations;
    if (sig2 != sig1) out.relations.push_back(p2.relations.front());
    const Poly diff = sym::reduce(p1.dn_symbol(N) - p2.dn_symbol(N), out.relations);
    out.term = {RatFunc(diff) / RatFunc(lam), 0, N + 1, Decay::Parameter, sig1 == sig2 ? sig1 : sig1 + "," + sig2};
    const Poly K = Poly::var("K");
    if (kase == AssumptionCase::A21) {
        out.closed_form = RatFunc(-(Poly::var("n1_0") - Poly::var("n2_0")), Poly::var("s1") + Poly::var("s2"));
    } else {
        out.closed_form = RatFunc(Poly::var("n1_1") - Poly::var("n2_1"), (K - lam * Poly::var("n0")).scaled(4));
    }
    out.matches_closed_form = out.term.coeff.equals(out.closed_form, out.relations);

    // lam -> 0: radicals tend to |xi'| on the principal branch.
    const Poly rho = Poly::var("rho");
    RatFunc limit = subs(subs(out.closed_form, "K", Poly::var("rho", 2)), "lam", Poly(0L));
    for (const auto& r : out.relations) limit = subs(limit, r.var, rho);
    const DifferenceSymbol plain = difference_principal_symbol(kase);
    out.zero_limit_matches = limit.equals(plain.term.coeff / RatFunc(lam));

    sym::ComplexEnv env;
    for (const auto& [k, v] : markers) env[k] = v;
    if (!markers.count("rho")) fail(ErrorKind::InvalidInput, "marker 'rho' (|xi'|) is required");
    const double xi = markers.at("rho");
    env["lam"] = lambda;
    env["K"] = xi * xi;
    if (kase == AssumptionCase::A21) {
        env["s1"] = std::sqrt(std::complex<double>(xi * xi) - lambda * markers.at("n1_0"));
        env["s2"] = std::sqrt(std::complex<double>(xi * xi) - lambda * markers.at("n2_0"));
    } else {
        env["s"] = std::sqrt(std::complex<double>(xi * xi) - lambda * markers.at("n0"));
    }
    out.value = out.closed_form.eval(env);
    return out;
}

ParameterSymbol parameter_principal_symbol(const ManifoldPair& pair, std::complex<double> lambda, double xi,
                                           int component) {
    sym::NumericEnv markers{{"rho", xi}};
    if (pair.base_case == AssumptionCase::A21) {
        markers["n1_0"] = pair.m1.index_jet(component, 0);
        markers["n2_0"] = pair.m2.index_jet(component, 0);
    } else {
        markers["n0"] = pair.m1.index_jet(component, 0);
        markers["n1_1"] = pair.m1.index_jet(component, 1);
        markers["n2_1"] = pair.m2.index_jet(component, 1);
    }
    return parameter_principal_symbol(pair.base_case, lambda, markers);
}

std::vector<TailPrediction> tail_predict(const ManifoldPair& pair, double lambda, int l) {
    const auto& levels = generic_dn_levels();
    const int s = pair.base_case == AssumptionCase::A21 ? 1 : 2;
    const double kappa = mode_kappa(pair.dimension(), l);
    std::vector<TailPrediction> out;
    for (int c = 0; c < pair.components(); ++c) {
        const double fb = pair.m1.f(pair.m1.boundary_radius(c));
        const double rho = std::sqrt(kappa) / fb;
        const double nmax = std::max(pair.m1.n(pair.m1.boundary_radius(c)), pair.m2.n(pair.m2.boundary_radius(c)));
        if (!(rho * rho > lambda * nmax))
            fail(ErrorKind::EllipticRegimeViolation, "mode " + std::to_string(l) + " is not in the elliptic regime at lambda");
        const auto e1 = jet_env(pair.m1, c, lambda, rho), e2 = jet_env(pair.m2, c, lambda, rho);
        TailPrediction t;
        for (int m = 0; m <= s + 1; ++m) t.lead += levels[m].eval(e1) - levels[m].eval(e2);
        t.lead -= pair.zeta[c];
        t.next = levels[s + 2].eval(e1) - levels[s + 2].eval(e2);
        t.value = t.lead + t.next;
        out.push_back(t);
    }
    return out;
}

bool tail_certifies(const ManifoldPair& pair, double lambda, int l) {
    const double kappa = mode_kappa(pair.dimension(), l);
    if (l == 0) return false;
    // No Dirichlet eigenvalue up to lambda in this or any later mode, and elliptic at the boundary.
    if (!(kappa > std::max(0.0, lambda) * std::max(pair.m1.max_n_f2(), pair.m2.max_n_f2()))) return false;
    std::vector<TailPrediction> preds;
    try {
        preds = tail_predict(pair, lambda, l);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::EllipticRegimeViolation) return false;
        throw;
    }
    for (int c = 0; c < pair.components(); ++c) {
        const auto& t = preds[c];
        double margin;
        if (pair.kase == AssumptionCase::ZETA) {
            const double base = t.lead + pair.zeta[c];
            margin = std::abs(pair.zeta[c]) - std::abs(base) - 4.0 * std::abs(t.next);
        } else {
            margin = pair.gamma * t.lead - 4.0 * std::abs(t.next);
        }
        if (!(margin > 0)) return false;
    }
    return true;
}

}  // namespace warpite
