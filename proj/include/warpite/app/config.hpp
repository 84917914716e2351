#pragma once

#include "warpite/ite.hpp"
#include "warpite/manifold.hpp"
#include "warpite/tolerances.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace warpite::app {

using json = nlohmann::json;

// Deterministic run configuration. Runtime settings (threads, cache directory) live in RuntimeOptions so
// they never reach the digest or the output files.
struct RunConfig {
    json effective;   // defaults filled in, key order stable

    std::vector<WarpedManifold> manifolds;
    std::vector<double> zeta;
    std::optional<AssumptionCase> requested_case;
    Tolerances tol;

    int l_max = 120;
    double lambda_min = 0.1;
    double lambda_max = 100.0;
    std::optional<double> alpha;
    std::vector<double> grid;
    SearchOptions search;

    std::vector<int> spectrum_modes;   // empty: every mode below lambda_max
    std::vector<int> sweep_modes;
    int sweep_samples = 200;
    int symbol_order = 4;
    std::optional<AssumptionCase> symbol_case;
    double symbol_lambda_re = -1.0, symbol_lambda_im = 0.0;
    double symbol_xi = 1.0;

    ManifoldPair pair() const;
    std::string digest() const;  // SHA-256 of the effective config
};

struct RuntimeOptions {
    int threads = 1;
    std::string cache_dir;   // empty disables the cache
};

json default_config();
// Validates keys and types against the schema and fills defaults; throws ConfigError.
RunConfig parse_config(const json& user);
RunConfig load_config(const std::string& path);

// Precedence: --cache-dir flag, then WARPITE_CACHE_DIR, then the config file's cache_dir.
RuntimeOptions resolve_runtime(const json& user, const std::optional<std::string>& cache_flag,
                               const std::optional<int>& threads_flag);

std::string sha256_hex(const std::string& data);
// %.17g, used by every CSV writer.
std::string format17(double x);

}  // namespace warpite::app
