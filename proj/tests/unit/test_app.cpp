#include "oracles.hpp"

#include "warpite/app/cache.hpp"
#include "warpite/app/commands.hpp"
#include "warpite/app/config.hpp"
#include "warpite/errors.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace warpite;
using namespace warpite::app;
namespace fs = std::filesystem;

namespace {

std::string config_dir() {
    const char* d = std::getenv("WARPITE_CONFIG_DIR");
    return d ? d : "configs";
}

json disk_manifold(const std::string& index) {
    return {{"dimension", 2}, {"domain", "cap"}, {"outer", "1"}, {"warp", {"0", "1"}}, {"index", {index}}};
}

ErrorKind parse_error(const json& user) {
    try {
        parse_config(user);
    } catch (const Error& e) {
        return e.kind();
    }
    return ErrorKind::InvalidInput;
}

fs::path temp_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("warpite_test_" + name + "_" + std::to_string(::getpid()));
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

}  // namespace

TEST_CASE("config defaults are explicit in the effective config") {
    const RunConfig cfg = parse_config({{"manifolds", {disk_manifold("1")}}});
    const json& e = cfg.effective;
    CHECK(e["tolerances"]["ode_rel"] == 1e-10);
    CHECK(e["search"]["l_max"] == 120);
    CHECK(e["search"]["grid"].size() == 20);
    CHECK(e["manifolds"][0]["inner"] == "0");
    CHECK(e["zeta"] == json::array({0.0}));
    CHECK_FALSE(e.contains("threads"));
    CHECK_FALSE(e.contains("cache_dir"));
    CHECK(cfg.digest().size() == 64);
}

TEST_CASE("equivalent configs share a digest, runtime settings do not enter it") {
    const json a = {{"manifolds", {disk_manifold("1")}}, {"search", {{"lambda_max", 20}}}};
    json b = {{"manifolds", {disk_manifold("1.0")}}, {"search", {{"lambda_max", 20.0}}}, {"threads", 8}};
    b["cache_dir"] = "/tmp/elsewhere";
    CHECK(parse_config(a).digest() == parse_config(b).digest());
    const json c = {{"manifolds", {disk_manifold("2")}}, {"search", {{"lambda_max", 20}}}};
    CHECK(parse_config(a).digest() != parse_config(c).digest());
}

TEST_CASE("schema violations are config errors") {
    CHECK(parse_error({{"manifolds", {disk_manifold("1")}}, {"bogus", 1}}) == ErrorKind::ConfigError);
    CHECK(parse_error({{"manifolds", {disk_manifold("1")}}, {"search", {{"l_max", "many"}}}}) == ErrorKind::ConfigError);
    CHECK(parse_error({{"manifolds", json::array()}}) == ErrorKind::ConfigError);
    json m = disk_manifold("1");
    m["domain"] = "torus";
    CHECK(parse_error({{"manifolds", {m}}}) == ErrorKind::ConfigError);
    m = disk_manifold("x/y");
    CHECK(parse_error({{"manifolds", {m}}}) == ErrorKind::ConfigError);
    CHECK(parse_error({{"manifolds", {disk_manifold("1")}}, {"search", {{"lambda_min", 5}, {"lambda_max", 1}}}}) ==
          ErrorKind::ConfigError);
}

TEST_CASE("cache directory precedence: flag, environment, config") {
    const json user = {{"cache_dir", "/from/config"}, {"threads", 3}};
    ::unsetenv("WARPITE_CACHE_DIR");
    CHECK(resolve_runtime(user, std::nullopt, std::nullopt).cache_dir == "/from/config");
    CHECK(resolve_runtime(user, std::nullopt, std::nullopt).threads == 3);
    ::setenv("WARPITE_CACHE_DIR", "/from/env", 1);
    CHECK(resolve_runtime(user, std::nullopt, std::nullopt).cache_dir == "/from/env");
    CHECK(resolve_runtime(user, std::string("/from/flag"), 5).cache_dir == "/from/flag");
    CHECK(resolve_runtime(user, std::string("/from/flag"), 5).threads == 5);
    ::unsetenv("WARPITE_CACHE_DIR");
}

TEST_CASE("17 significant digits round-trip doubles") {
    for (double x : {0.1, 1.0 / 3.0, 5.783185962946784, 1e-300}) CHECK(std::stod(format17(x)) == x);
    CHECK(format17(0.1) == "0.10000000000000001");
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("cache entries round-trip exactly") {
    const fs::path dir = temp_dir("cache");
    SpectrumCache cache(dir.string());
    const WarpedManifold m(2, RadialDomain::cap({1, false}), RationalPolynomial({0, 1}), RationalPolynomial({1}));
    const auto fresh = cache.spectrum(m, 3, 200.0, {});
    CHECK(cache.misses() == 1);
    const auto again = cache.spectrum(m, 3, 200.0, {});
    CHECK(cache.hits() == 1);
    REQUIRE(fresh.size() == again.size());
    for (size_t i = 0; i < fresh.size(); ++i) {
        CHECK(fresh[i].lambda0 == again[i].lambda0);
        CHECK(fresh[i].boundary_data == again[i].boundary_data);
        CHECK(fresh[i].j == again[i].j);
    }
    // Different tolerances give a different key.
    Tolerances t;
    t.ode_rel = 1e-11;
    CHECK(SpectrumCache::key(m, 3, 200.0, t) != SpectrumCache::key(m, 3, 200.0, {}));
    fs::remove_all(dir);
}

TEST_CASE("spectrum output is identical with and without cache and across thread counts") {
    const RunConfig cfg = parse_config({{"manifolds", {disk_manifold("1")}}, {"search", {{"lambda_max", 120}}}});
    const fs::path dir = temp_dir("spectrum");
    RuntimeOptions plain, cached, threaded;
    cached.cache_dir = dir.string();
    threaded.threads = 4;
    threaded.cache_dir = dir.string();
    const std::string a = cmd_spectrum(cfg, plain);
    const std::string b = cmd_spectrum(cfg, cached);
    const std::string c = cmd_spectrum(cfg, threaded);
    CHECK(a == b);
    CHECK(a == c);
    CHECK(a.rfind("# config_digest=" + cfg.digest() + "\n", 0) == 0);
    fs::remove_all(dir);

    // Rows are sorted and match squared Bessel zeros.
    std::istringstream in(a);
    std::string line;
    std::getline(in, line);
    std::getline(in, line);
    CHECK(line == "manifold,l,j,lambda,multiplicity");
    double prev = 0;
    int rows = 0;
    while (std::getline(in, line)) {
        int k, l, j;
        long long mult;
        double lam;
        REQUIRE(std::sscanf(line.c_str(), "%d,%d,%d,%lf,%lld", &k, &l, &j, &lam, &mult) == 5);
        CHECK(lam >= prev);
        CHECK(lam == doctest::Approx(oracle::disk_eigenvalue(l, j)).epsilon(1e-9));
        prev = lam;
        ++rows;
    }
    int expected = 0;
    for (int l = 0; oracle::disk_eigenvalue(l, 1) <= 120; ++l)
        for (int j = 1; oracle::disk_eigenvalue(l, j) <= 120; ++j) ++expected;
    CHECK(rows == expected);
}

TEST_CASE("command exit codes and JSON errors") {
    const std::string dir = config_dir();
    std::ostringstream out, err;
    CommandOptions o;
    o.config_path = dir + "/disk_pair.json";
    CHECK(run_command("validate", o, out, err) == kExitOk);
    const json v = json::parse(out.str());
    CHECK(v["case"] == "A21");
    CHECK(v["gamma"] == 1);

    std::ostringstream out2, err2;
    o.config_path = dir + "/bad_identical.json";
    CHECK(run_command("validate", o, out2, err2) == kExitAssumption);
    std::string last, line;
    std::istringstream es(err2.str());
    while (std::getline(es, line)) last = line;
    CHECK(json::parse(last)["error"]["kind"] == "AssumptionViolation");

    std::ostringstream out3, err3;
    o.config_path = dir + "/does_not_exist.json";
    CHECK(run_command("validate", o, out3, err3) == kExitConfig);
    CHECK(json::parse(err3.str())["error"]["kind"] == "ConfigError");
}

TEST_CASE("mixed zeta signs on a shell are rejected with exit code 2") {
    const fs::path dir = temp_dir("zeta");
    const json shell = {{"dimension", 2}, {"domain", "shell"}, {"inner", "1/2"}, {"outer", "1"},
                        {"warp", {"0", "1"}}, {"index", {"1"}}};
    json other = shell;
    other["index"] = {"3/2"};
    const std::string path = (dir / "mixed.json").string();
    std::ofstream(path) << json{{"manifolds", {shell, other}}, {"zeta", {1, -1}}}.dump();
    std::ostringstream out, err;
    CommandOptions o;
    o.config_path = path;
    CHECK(run_command("validate", o, out, err) == kExitAssumption);
    CHECK(err.str().find("zeta sign condition") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("ite and weyl documents embed the digest and are thread independent") {
    RunConfig cfg = load_config(config_dir() + "/cylinder_pair.json");
    RuntimeOptions one, four;
    four.threads = 4;
    const std::string a = cmd_ite(cfg, one);
    CHECK(a == cmd_ite(cfg, four));
    const json doc = json::parse(a);
    CHECK(doc["config_digest"] == cfg.digest());
    CHECK(doc["count"].get<long long>() > 0);
    const json w = json::parse(cmd_weyl(cfg, four));
    CHECK(w["bound_holds"] == true);
    CHECK(w["config_digest"] == cfg.digest());
}

TEST_CASE("symbol document carries both closed forms") {
    const RunConfig cfg = load_config(config_dir() + "/a22_pair.json");
    const json s = json::parse(cmd_symbol(cfg, {}));
    CHECK(s["pair"]["case"] == "A22");
    CHECK(s["pair"]["components"][0]["difference"]["matches_closed_form"] == true);
    CHECK(s["generic"]["matches_closed_form"] == true);
    CHECK(s["manifolds"].size() == 2);
    CHECK(s["manifolds"][0]["levels"].size() == 5);
}
