#pragma once

#include "warpite/app/config.hpp"
#include "warpite/errors.hpp"

#include <iosfwd>
#include <optional>
#include <string>

namespace warpite::app {

struct CommandOptions {
    std::optional<std::string> config_path;
    std::optional<std::string> cache_dir;
    std::optional<int> threads;
    std::optional<std::string> out;
};

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitAssumption = 2;
inline constexpr int kExitConfig = 3;

int exit_code_for(ErrorKind kind);
json error_json(ErrorKind kind, const std::string& message);

// Each command returns the full output document (CSV or JSON text).
std::string cmd_validate(const RunConfig& cfg, const RuntimeOptions& rt);
std::string cmd_spectrum(const RunConfig& cfg, const RuntimeOptions& rt);
std::string cmd_dtn_sweep(const RunConfig& cfg, const RuntimeOptions& rt);
std::string cmd_ite(const RunConfig& cfg, const RuntimeOptions& rt);
std::string cmd_weyl(const RunConfig& cfg, const RuntimeOptions& rt);
std::string cmd_symbol(const RunConfig& cfg, const RuntimeOptions& rt);

// Loads the config, echoes the effective config to `err`, runs the command and writes its output to --out or `out`.
// Errors become a JSON object on `err` and a nonzero return value.
int run_command(const std::string& command, const CommandOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace warpite::app
