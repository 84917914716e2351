#include "warpite/app/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"warpite: interior transmission eigenvalues on warped-product manifolds"};
    app.require_subcommand(1);

    warpite::app::CommandOptions opts;
    std::string config, cache_dir, out;
    int threads = 0;

    const char* names[][2] = {
        {"validate", "Check the pair assumptions and report the case and sign"},
        {"spectrum", "Per-mode Dirichlet spectra as CSV"},
        {"dtn-sweep", "Mode-wise D-N matrices and mu values on a lambda grid as CSV"},
        {"ite", "Real interior transmission eigenvalues as JSON"},
        {"weyl", "Counting-function lower bound report as JSON"},
        {"symbol", "Symbol recursion and principal difference symbols as JSON"},
    };
    for (const auto& [name, help] : names) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config, "JSON run configuration")->required();
        sub->add_option("--cache-dir", cache_dir, "Spectrum cache directory (overrides WARPITE_CACHE_DIR)");
        sub->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
        sub->add_option("--out", out, "Output file (default: standard output)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : warpite::app::kExitConfig;
    }

    CLI::App* sub = app.get_subcommands().front();
    opts.config_path = config;
    if (sub->count("--cache-dir")) opts.cache_dir = cache_dir;
    if (sub->count("--threads")) opts.threads = threads;
    if (sub->count("--out")) opts.out = out;
    return warpite::app::run_command(sub->get_name(), opts, std::cout, std::cerr);
}
