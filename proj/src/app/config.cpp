#include "warpite/app/config.hpp"

#include "warpite/errors.hpp"
#include "warpite/exact.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace warpite::app {

namespace {

[[noreturn]] void bad(const std::string& where, const std::string& what) {
    fail(ErrorKind::ConfigError, where + ": " + what);
}

json default_manifold() {
    return {{"dimension", 2}, {"domain", "cap"}, {"inner", nullptr}, {"outer", "1"},
            {"warp", json::array({"0", "1"})}, {"index", json::array({"1"})}};
}

// Checks that every key of `user` exists in `defaults` with a compatible type and returns the merge.
json merge(const json& defaults, const json& user, const std::string& where) {
    if (!user.is_object()) bad(where, "expected an object");
    json out = defaults;
    for (auto it = user.begin(); it != user.end(); ++it) {
        const std::string path = where.empty() ? it.key() : where + "." + it.key();
        if (!defaults.contains(it.key())) bad(path, "unknown key");
        const json& d = defaults[it.key()];
        const json& u = it.value();
        if (d.is_object()) {
            out[it.key()] = merge(d, u, path);
        } else if (d.is_null() || u.is_null()) {
            out[it.key()] = u;
        } else if (d.is_number() && !u.is_number()) {
            bad(path, "expected a number");
        } else if (d.is_string() && !u.is_string()) {
            bad(path, "expected a string");
        } else if (d.is_array() && !u.is_array()) {
            bad(path, "expected an array");
        } else {
            out[it.key()] = u;
        }
    }
    return out;
}

std::string exact_text(const json& v, const std::string& where) {
    std::string text;
    if (v.is_string()) text = v.get<std::string>();
    else if (v.is_number()) text = v.dump();
    else bad(where, "expected a number or a string");
    try {
        return parse_exact_real(text).str();
    } catch (const Error& e) {
        bad(where, e.what());
    }
}

RationalPolynomial poly_from(const json& arr, const std::string& where) {
    if (!arr.is_array() || arr.empty()) bad(where, "expected a non-empty coefficient array");
    std::vector<Rational> c;
    for (size_t i = 0; i < arr.size(); ++i) {
        const auto& v = arr[i];
        std::string text = v.is_string() ? v.get<std::string>() : v.dump();
        try {
            c.push_back(parse_rational(text));
        } catch (const Error& e) {
            bad(where + "[" + std::to_string(i) + "]", e.what());
        }
    }
    return RationalPolynomial(c);
}

json normalize_poly(const RationalPolynomial& p) {
    json a = json::array();
    for (const auto& c : p.coeffs()) a.push_back(to_string(c));
    if (a.empty()) a.push_back("0");
    return a;
}

int get_int(const json& v, const std::string& where, int lo) {
    if (!v.is_number_integer()) bad(where, "expected an integer");
    const int x = v.get<int>();
    if (x < lo) bad(where, "must be at least " + std::to_string(lo));
    return x;
}

double get_positive(const json& v, const std::string& where) {
    const double x = v.get<double>();
    if (!(x > 0)) bad(where, "must be positive");
    return x;
}

std::vector<int> get_modes(const json& v, const std::string& where) {
    std::vector<int> out;
    for (size_t i = 0; i < v.size(); ++i) out.push_back(get_int(v[i], where + "[" + std::to_string(i) + "]", 0));
    return out;
}

}  // namespace

json default_config() {
    return {
        {"manifolds", json::array()},
        {"zeta", nullptr},
        {"case", nullptr},
        {"tolerances", {{"ode_rel", 1e-10}, {"root_rel", 1e-9}, {"pole_tol", 1e-7}, {"degeneracy_tol", 1e-8}}},
        {"search",
         {{"l_max", 120},
          {"lambda_min", 0.1},
          {"lambda_max", 100.0},
          {"scan_divisions", 64},
          {"window_rel", 1e-5},
          {"alpha", nullptr},
          {"grid", json::array()},
          {"grid_points", 20}}},
        {"spectrum", {{"modes", json::array()}}},
        {"dtn_sweep", {{"modes", json::array({0})}, {"samples", 200}}},
        {"symbol", {{"order", 4}, {"case", nullptr}, {"lambda", json::array({-1.0, 0.0})}, {"xi", 1.0}}},
        {"cache_dir", nullptr},
        {"threads", 1},
    };
}

RunConfig parse_config(const json& user) {
    json eff = merge(default_config(), user, "");
    eff.erase("cache_dir");
    eff.erase("threads");
    RunConfig cfg;

    const json& ms = eff["manifolds"];
    if (ms.size() < 1 || ms.size() > 2) bad("manifolds", "expected one or two manifold blocks");
    json norm_ms = json::array();
    for (size_t i = 0; i < ms.size(); ++i) {
        const std::string w = "manifolds[" + std::to_string(i) + "]";
        json m = merge(default_manifold(), ms[i], w);
        const int d = get_int(m["dimension"], w + ".dimension", 2);
        const std::string dom = m["domain"].get<std::string>();
        const auto warp = poly_from(m["warp"], w + ".warp");
        const auto index = poly_from(m["index"], w + ".index");
        RadialDomain domain;
        if (dom == "cap") {
            if (!m["inner"].is_null() && exact_text(m["inner"], w + ".inner") != "0") bad(w + ".inner", "a cap starts at 0");
            domain = RadialDomain::cap(parse_exact_real(exact_text(m["outer"], w + ".outer")));
            m["inner"] = "0";
        } else if (dom == "shell") {
            if (m["inner"].is_null()) bad(w + ".inner", "a shell needs an inner radius");
            domain = RadialDomain::shell(parse_exact_real(exact_text(m["inner"], w + ".inner")),
                                         parse_exact_real(exact_text(m["outer"], w + ".outer")));
            m["inner"] = exact_text(m["inner"], w + ".inner");
        } else {
            bad(w + ".domain", "expected \"cap\" or \"shell\"");
        }
        m["outer"] = exact_text(m["outer"], w + ".outer");
        m["warp"] = normalize_poly(warp);
        m["index"] = normalize_poly(index);
        cfg.manifolds.emplace_back(d, domain, warp, index);
        norm_ms.push_back(m);
    }
    eff["manifolds"] = norm_ms;

    const int comps = cfg.manifolds[0].components();
    if (eff["zeta"].is_null()) {
        eff["zeta"] = json(std::vector<double>(comps, 0.0));
    } else if (!eff["zeta"].is_array()) {
        bad("zeta", "expected an array");
    }
    for (const auto& z : eff["zeta"]) {
        if (!z.is_number()) bad("zeta", "expected numbers");
        cfg.zeta.push_back(z.get<double>());
    }
    if (!eff["case"].is_null()) {
        if (!eff["case"].is_string()) bad("case", "expected a string");
        try {
            cfg.requested_case = parse_case(eff["case"].get<std::string>());
        } catch (const Error& e) {
            bad("case", e.what());
        }
    }

    const json& t = eff["tolerances"];
    cfg.tol.ode_rel = get_positive(t["ode_rel"], "tolerances.ode_rel");
    cfg.tol.root_rel = get_positive(t["root_rel"], "tolerances.root_rel");
    cfg.tol.pole_tol = get_positive(t["pole_tol"], "tolerances.pole_tol");
    cfg.tol.degeneracy_tol = get_positive(t["degeneracy_tol"], "tolerances.degeneracy_tol");

    const json& s = eff["search"];
    cfg.l_max = get_int(s["l_max"], "search.l_max", 0);
    cfg.lambda_min = s["lambda_min"].get<double>();
    cfg.lambda_max = s["lambda_max"].get<double>();
    if (!(cfg.lambda_max > cfg.lambda_min)) bad("search", "lambda_max must exceed lambda_min");
    cfg.search.scan_divisions = get_int(s["scan_divisions"], "search.scan_divisions", 2);
    cfg.search.window_rel = get_positive(s["window_rel"], "search.window_rel");
    if (!s["alpha"].is_null()) {
        if (!s["alpha"].is_number()) bad("search.alpha", "expected a number");
        cfg.alpha = get_positive(s["alpha"], "search.alpha");
    }
    for (const auto& g : s["grid"]) {
        if (!g.is_number()) bad("search.grid", "expected numbers");
        cfg.grid.push_back(g.get<double>());
    }
    const int gp = get_int(s["grid_points"], "search.grid_points", 1);
    if (cfg.grid.empty())
        for (int k = 1; k <= gp; ++k) cfg.grid.push_back(cfg.lambda_max * k / gp);

    cfg.spectrum_modes = get_modes(eff["spectrum"]["modes"], "spectrum.modes");
    cfg.sweep_modes = get_modes(eff["dtn_sweep"]["modes"], "dtn_sweep.modes");
    cfg.sweep_samples = get_int(eff["dtn_sweep"]["samples"], "dtn_sweep.samples", 2);

    const json& sy = eff["symbol"];
    cfg.symbol_order = get_int(sy["order"], "symbol.order", 0);
    if (!sy["case"].is_null()) {
        try {
            cfg.symbol_case = parse_case(sy["case"].get<std::string>());
        } catch (const Error& e) {
            bad("symbol.case", e.what());
        }
    }
    if (sy["lambda"].size() != 2 || !sy["lambda"][0].is_number() || !sy["lambda"][1].is_number())
        bad("symbol.lambda", "expected [re, im]");
    cfg.symbol_lambda_re = sy["lambda"][0].get<double>();
    cfg.symbol_lambda_im = sy["lambda"][1].get<double>();
    cfg.symbol_xi = get_positive(sy["xi"], "symbol.xi");

    // Numbers are echoed as doubles so that 20 and 20.0 give the same digest; the generated grid is made explicit.
    eff["zeta"] = cfg.zeta;
    eff["tolerances"] = {{"ode_rel", cfg.tol.ode_rel}, {"root_rel", cfg.tol.root_rel}, {"pole_tol", cfg.tol.pole_tol},
                         {"degeneracy_tol", cfg.tol.degeneracy_tol}};
    eff["search"]["lambda_min"] = cfg.lambda_min;
    eff["search"]["lambda_max"] = cfg.lambda_max;
    eff["search"]["window_rel"] = cfg.search.window_rel;
    eff["search"]["grid"] = cfg.grid;
    if (cfg.alpha) eff["search"]["alpha"] = *cfg.alpha;
    eff["symbol"]["lambda"] = {cfg.symbol_lambda_re, cfg.symbol_lambda_im};
    eff["symbol"]["xi"] = cfg.symbol_xi;

    cfg.search.threads = 1;
    cfg.effective = eff;
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::ConfigError, "cannot open config file " + path);
    json user;
    try {
        user = json::parse(in);
    } catch (const json::parse_error& e) {
        fail(ErrorKind::ConfigError, std::string("config is not valid JSON: ") + e.what());
    }
    return parse_config(user);
}

ManifoldPair RunConfig::pair() const {
    if (manifolds.size() != 2) fail(ErrorKind::ConfigError, "this command needs two manifolds");
    return validate_pair(manifolds[0], manifolds[1], zeta, requested_case);
}

std::string RunConfig::digest() const { return sha256_hex(effective.dump()); }

RuntimeOptions resolve_runtime(const json& user, const std::optional<std::string>& cache_flag,
                               const std::optional<int>& threads_flag) {
    RuntimeOptions rt;
    if (user.contains("threads") && user["threads"].is_number_integer()) rt.threads = user["threads"].get<int>();
    if (threads_flag) rt.threads = *threads_flag;
    if (rt.threads < 1) fail(ErrorKind::ConfigError, "threads must be at least 1");
    if (user.contains("cache_dir") && user["cache_dir"].is_string()) rt.cache_dir = user["cache_dir"].get<std::string>();
    if (const char* env = std::getenv("WARPITE_CACHE_DIR"); env && *env) rt.cache_dir = env;
    if (cache_flag) rt.cache_dir = *cache_flag;
    return rt;
}

std::string sha256_hex(const std::string& data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
        fail(ErrorKind::ConfigError, "SHA-256 digest failed");
    std::string hex;
    char buf[3];
    for (unsigned int i = 0; i < len; ++i) {
        std::snprintf(buf, sizeof buf, "%02x", md[i]);
        hex += buf;
    }
    return hex;
}

std::string format17(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace warpite::app
