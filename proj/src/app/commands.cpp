#include "warpite/app/commands.hpp"

#include "warpite/app/cache.hpp"
#include "warpite/errors.hpp"
#include "warpite/ite.hpp"
#include "warpite/parallel.hpp"
#include "warpite/radial.hpp"
#include "warpite/symbolic.hpp"
#include "warpite/weyl.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <tuple>

namespace warpite::app {

namespace {

json ite_json(const ITERecord& r) {
    return {{"lambda", r.lambda},
            {"kind", ite_kind_name(r.kind)},
            {"modes", r.modes},
            {"multiplicity", r.multiplicity},
            {"residual", r.residual},
            {"at_pole", r.at_pole},
            {"ambiguous", r.ambiguous},
            {"crossing_delta", r.crossing_delta}};
}

json term_json(const SymbolTerm& t) {
    return {{"coeff", t.coeff.str()},
            {"a", t.a},
            {"b", t.b},
            {"decay", t.decay == Decay::Plain ? "plain" : "parameter"},
            {"sigma", t.sigma}};
}

std::string term_text(const SymbolTerm& t) {
    std::ostringstream os;
    os << "(" << t.coeff.str() << ")";
    if (t.a) os << " y^" << t.a;
    os << " exp(-" << t.sigma << " y)";
    return os.str();
}

std::string csv_header(const RunConfig& cfg, const std::string& columns) {
    return "# config_digest=" + cfg.digest() + "\n" + columns + "\n";
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

// Modes with a Dirichlet eigenvalue below lambda_max, following the cutoff used by mode_spectra.
std::vector<int> default_modes(const WarpedManifold& m, double lambda_max, int l_max) {
    std::vector<int> modes;
    for (int l = 0;; ++l) {
        if (mode_kappa(m.dimension(), l) > lambda_max * m.max_n_f2()) break;
        if (l > l_max) {
            std::ostringstream os;
            os << "spectrum below " << lambda_max << " needs modes beyond l_max=" << l_max;
            fail(ErrorKind::TruncationUncertified, os.str());
        }
        modes.push_back(l);
    }
    return modes;
}

}  // namespace

int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::AssumptionViolation:
        case ErrorKind::MismatchedBoundary: return kExitAssumption;
        case ErrorKind::ConfigError:
        case ErrorKind::InvalidInput:
        case ErrorKind::AmbiguousCase: return kExitConfig;
        default: return kExitFailure;
    }
}

json error_json(ErrorKind kind, const std::string& message) {
    return {{"error", {{"kind", error_kind_name(kind)}, {"message", message}}}};
}

std::string cmd_validate(const RunConfig& cfg, const RuntimeOptions&) {
    const ManifoldPair pair = cfg.pair();
    return dump({{"config_digest", cfg.digest()},
                 {"case", case_name(pair.kase)},
                 {"base_case", case_name(pair.base_case)},
                 {"gamma", pair.gamma},
                 {"weight_order", pair.weight_order()},
                 {"components", pair.components()},
                 {"dimension", pair.dimension()},
                 {"zeta", pair.zeta}});
}

std::string cmd_spectrum(const RunConfig& cfg, const RuntimeOptions& rt) {
    SpectrumCache cache(rt.cache_dir);
    std::vector<std::pair<int, int>> tasks;  // (manifold, l)
    for (size_t k = 0; k < cfg.manifolds.size(); ++k) {
        const auto modes = cfg.spectrum_modes.empty() ? default_modes(cfg.manifolds[k], cfg.lambda_max, cfg.l_max)
                                                      : cfg.spectrum_modes;
        for (int l : modes) tasks.emplace_back(static_cast<int>(k), l);
    }
    std::vector<std::vector<DirichletEigenRecord>> results(tasks.size());
    parallel_for(tasks.size(), rt.threads, [&](size_t i) {
        const auto& m = cfg.manifolds[tasks[i].first];
        results[i] = cache.spectrum(m, tasks[i].second, cfg.lambda_max, cfg.tol);
    });

    std::vector<std::tuple<double, int, int, int, long long>> rows;  // lambda, manifold, l, j, mult
    for (size_t i = 0; i < tasks.size(); ++i)
        for (const auto& r : results[i]) rows.emplace_back(r.lambda0, tasks[i].first + 1, r.l, r.j, r.mult_geometric);
    std::sort(rows.begin(), rows.end());

    std::string out = csv_header(cfg, "manifold,l,j,lambda,multiplicity");
    for (const auto& [lam, k, l, j, mult] : rows)
        out += std::to_string(k) + "," + std::to_string(l) + "," + std::to_string(j) + "," + format17(lam) + "," +
               std::to_string(mult) + "\n";
    return out;
}

std::string cmd_dtn_sweep(const RunConfig& cfg, const RuntimeOptions& rt) {
    const bool have_pair = cfg.manifolds.size() == 2;
    std::optional<ManifoldPair> pair;
    if (have_pair) pair = cfg.pair();
    const int n = cfg.sweep_samples;
    std::vector<double> lams(n);
    for (int k = 0; k < n; ++k) lams[k] = cfg.lambda_min + (cfg.lambda_max - cfg.lambda_min) * k / (n - 1);

    std::vector<std::pair<int, int>> tasks;  // (mode index, sample)
    for (size_t mi = 0; mi < cfg.sweep_modes.size(); ++mi)
        for (int k = 0; k < n; ++k) tasks.emplace_back(static_cast<int>(mi), k);
    std::vector<std::string> chunks(tasks.size());
    parallel_for(tasks.size(), rt.threads, [&](size_t i) {
        const int l = cfg.sweep_modes[tasks[i].first];
        const double lam = lams[tasks[i].second];
        std::string s;
        const std::string prefix_l = std::to_string(l) + "," + format17(lam) + ",";
        for (size_t k = 0; k < cfg.manifolds.size(); ++k) {
            const DtnModeSample smp = dtn_mode(cfg.manifolds[k], lam, l, cfg.tol);
            const int c = cfg.manifolds[k].components();
            for (int r = 0; r < c; ++r)
                for (int q = 0; q < c; ++q)
                    s += "m" + std::to_string(k + 1) + "," + prefix_l + std::to_string(r) + "," + std::to_string(q) +
                         "," + (smp.is_pole ? "nan" : format17(smp.matrix(r, q))) + "," + (smp.is_pole ? "1" : "0") +
                         "\n";
        }
        if (pair) {
            // At a pole the regular part stands in for the difference.
            const DifferenceSample diff = difference_mode(*pair, lam, l, cfg.tol);
            const auto mu = mu_from_matrix(*pair, l, diff.diff_matrix);
            for (size_t r = 0; r < mu.size(); ++r)
                s += "mu," + prefix_l + std::to_string(r) + "," + std::to_string(r) + "," + format17(mu[r]) +
                     "," + (diff.regularized ? "1" : "0") + "\n";
        }
        chunks[i] = std::move(s);
    });
    std::string out = csv_header(cfg, "source,l,lambda,row,col,value,pole");
    for (const auto& c : chunks) out += c;
    return out;
}

std::string cmd_ite(const RunConfig& cfg, const RuntimeOptions& rt) {
    const ManifoldPair pair = cfg.pair();
    SearchOptions opts = cfg.search;
    opts.threads = rt.threads;
    const auto ites = find_ites(pair, cfg.lambda_min, cfg.lambda_max, cfg.l_max, opts, cfg.tol);
    json arr = json::array();
    long long total = 0;
    for (const auto& r : ites) {
        arr.push_back(ite_json(r));
        total += r.multiplicity;
    }
    return dump({{"config_digest", cfg.digest()},
                 {"interval", {cfg.lambda_min, cfg.lambda_max}},
                 {"count", total},
                 {"ites", arr}});
}

std::string cmd_weyl(const RunConfig& cfg, const RuntimeOptions& rt) {
    const ManifoldPair pair = cfg.pair();
    SearchOptions opts = cfg.search;
    opts.threads = rt.threads;
    const double alpha = cfg.alpha ? *cfg.alpha : 0.5 * lowest_dirichlet(pair, cfg.tol);
    std::vector<double> grid;
    for (double g : cfg.grid)
        if (g > alpha) grid.push_back(g);
    const WeylReport rep = verify_lower_bound(pair, alpha, grid, cfg.l_max, opts, cfg.tol);

    auto wc = [](const WeylConstant& w) {
        return json{{"value", w.value}, {"literal_value", w.literal_value}, {"volume", w.volume}};
    };
    json g = json::array();
    for (const auto& p : rep.grid)
        g.push_back({{"lambda", p.lambda},
                     {"n_t", p.n_t},
                     {"pole_sum", p.pole_sum},
                     {"bound", p.bound},
                     {"slack", p.slack},
                     {"n_minus", p.n_minus},
                     {"n_zero", p.n_zero},
                     {"n_pole", p.n_pole},
                     {"n_singular", p.n_singular},
                     {"decomposition_ok", p.decomposition_ok},
                     {"crossing_bound_ok", p.crossing_bound_ok}});
    json jumps = json::array();
    for (const auto& j : rep.jumps)
        jumps.push_back({{"lambda0", j.lambda0},
                         {"epsilon", j.epsilon},
                         {"m1", j.m1},
                         {"m2", j.m2},
                         {"overlap", j.overlap},
                         {"delta_measured", j.delta_measured},
                         {"delta_crossings", j.delta_crossings},
                         {"delta", j.delta},
                         {"predicted", j.predicted},
                         {"consistent", j.consistent}});
    json ites = json::array();
    for (const auto& r : rep.ites) ites.push_back(ite_json(r));
    return dump({{"config_digest", cfg.digest()},
                 {"alpha", rep.alpha},
                 {"v1", wc(rep.v1)},
                 {"v2", wc(rep.v2)},
                 {"gamma", pair.gamma},
                 {"predicted_slope", rep.predicted_slope},
                 {"n_minus_alpha", rep.n_minus_alpha},
                 {"fitted_slope", rep.fitted_slope},
                 {"fitted_offset", rep.fitted_offset},
                 {"fitted_constant", rep.fitted_constant},
                 {"bound_holds", rep.bound_holds},
                 {"grid", g},
                 {"jumps", jumps},
                 {"ites", ites}});
}

std::string cmd_symbol(const RunConfig& cfg, const RuntimeOptions&) {
    const int N = cfg.symbol_order;
    if (N > kMaxSymbolOrder) fail(ErrorKind::UnsupportedOrder, "symbol order above " + std::to_string(kMaxSymbolOrder));
    json doc = {{"config_digest", cfg.digest()}, {"order", N}};

    json per = json::array();
    for (const auto& m : cfg.manifolds) {
        const SymbolSeries s = symbol_recursion(manifold_jets(m, 0, N + 1), N);
        json levels = json::array();
        for (int lev = 0; lev <= N; ++lev) {
            json terms = json::array();
            std::string text;
            for (const auto& t : s.terms(lev)) {
                terms.push_back(term_json(t));
                text += (text.empty() ? "" : " + ") + term_text(t);
            }
            levels.push_back({{"level", lev},
                              {"terms", terms},
                              {"text", text.empty() ? "0" : text},
                              {"dn_symbol", s.dn_symbol(lev).str()},
                              {"homogeneous", check_homogeneity(s, lev)}});
        }
        per.push_back({{"manifold", m.describe()}, {"levels", levels}});
    }
    doc["manifolds"] = per;

    auto diff_json = [](const DifferenceSymbol& d) {
        return json{{"level", d.level},
                    {"term", term_json(d.term)},
                    {"text", term_text(d.term)},
                    {"closed_form", d.closed_form.str()},
                    {"matches_closed_form", d.matches_closed_form}};
    };
    if (cfg.manifolds.size() == 2) {
        const ManifoldPair pair = cfg.pair();
        json comps = json::array();
        for (int c = 0; c < pair.components(); ++c) {
            const ParameterSymbol p = parameter_principal_symbol(
                pair, {cfg.symbol_lambda_re, cfg.symbol_lambda_im}, cfg.symbol_xi, c);
            comps.push_back({{"component", c},
                             {"difference", diff_json(difference_principal_symbol(pair, c))},
                             {"parameter",
                              {{"term", term_json(p.term)},
                               {"closed_form", p.closed_form.str()},
                               {"matches_closed_form", p.matches_closed_form},
                               {"zero_limit_matches", p.zero_limit_matches},
                               {"value", {p.value.real(), p.value.imag()}}}}});
        }
        doc["pair"] = {{"case", case_name(pair.kase)}, {"components", comps}};
    }
    if (cfg.symbol_case) doc["generic"] = diff_json(difference_principal_symbol(*cfg.symbol_case));
    return dump(doc);
}

int run_command(const std::string& command, const CommandOptions& opts, std::ostream& out, std::ostream& err) {
    try {
        if (!opts.config_path) fail(ErrorKind::ConfigError, "--config is required");
        std::ifstream in(*opts.config_path);
        if (!in) fail(ErrorKind::ConfigError, "cannot open config file " + *opts.config_path);
        json user;
        try {
            user = json::parse(in);
        } catch (const json::parse_error& e) {
            fail(ErrorKind::ConfigError, std::string("config is not valid JSON: ") + e.what());
        }
        const RunConfig cfg = parse_config(user);
        const RuntimeOptions rt = resolve_runtime(user, opts.cache_dir, opts.threads);
        err << json{{"effective_config", cfg.effective},
                    {"config_digest", cfg.digest()},
                    {"runtime", {{"threads", rt.threads}, {"cache_dir", rt.cache_dir}}}}
                   .dump()
            << "\n";

        std::string text;
        if (command == "validate") text = cmd_validate(cfg, rt);
        else if (command == "spectrum") text = cmd_spectrum(cfg, rt);
        else if (command == "dtn-sweep") text = cmd_dtn_sweep(cfg, rt);
        else if (command == "ite") text = cmd_ite(cfg, rt);
        else if (command == "weyl") text = cmd_weyl(cfg, rt);
        else if (command == "symbol") text = cmd_symbol(cfg, rt);
        else fail(ErrorKind::ConfigError, "unknown command " + command);

        if (opts.out) {
            std::ofstream f(*opts.out, std::ios::binary);
            if (!f) fail(ErrorKind::ConfigError, "cannot write " + *opts.out);
            f << text;
        } else {
            out << text;
        }
        return kExitOk;
    } catch (const Error& e) {
        err << error_json(e.kind(), e.what()).dump() << "\n";
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        err << json{{"error", {{"kind", "Internal"}, {"message", e.what()}}}}.dump() << "\n";
        return kExitFailure;
    }
}

}  // namespace warpite::app
