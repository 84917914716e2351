#include "warpite/app/cache.hpp"

#include "warpite/app/config.hpp"
#include "warpite/errors.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

namespace warpite::app {

namespace fs = std::filesystem;

SpectrumCache::SpectrumCache(std::string dir) : dir_(std::move(dir)) {
    if (!enabled()) return;
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) fail(ErrorKind::ConfigError, "cannot create cache directory " + dir_ + ": " + ec.message());
}

std::string SpectrumCache::key(const WarpedManifold& m, int l, double lambda_max, const Tolerances& tol) {
    const json k = {{"manifold", m.describe()},
                    {"l", l},
                    {"lambda_max", format17(lambda_max)},
                    {"tolerances",
                     {format17(tol.ode_rel), format17(tol.root_rel), format17(tol.pole_tol),
                      format17(tol.degeneracy_tol)}},
                    {"version", kCacheVersion}};
    return sha256_hex(k.dump());
}

std::string SpectrumCache::path(const std::string& key) const { return (fs::path(dir_) / (key + ".json")).string(); }

std::optional<std::vector<DirichletEigenRecord>> SpectrumCache::load(const std::string& key) const {
    if (!enabled()) return std::nullopt;
    std::ifstream in(path(key));
    if (!in) return std::nullopt;
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error&) {
        return std::nullopt;
    }
    if (doc.value("version", "") != kCacheVersion || doc.value("key", "") != key) return std::nullopt;
    std::vector<DirichletEigenRecord> out;
    for (const auto& r : doc["records"]) {
        DirichletEigenRecord rec;
        rec.lambda0 = r["lambda0"].get<double>();
        rec.l = r["l"].get<int>();
        rec.j = r["j"].get<int>();
        rec.boundary_data = r["boundary_data"].get<std::vector<double>>();
        rec.mult_geometric = r["mult"].get<long long>();
        out.push_back(std::move(rec));
    }
    return out;
}

void SpectrumCache::store(const std::string& key, const std::vector<DirichletEigenRecord>& records) {
    if (!enabled()) return;
    json recs = json::array();
    for (const auto& r : records)
        recs.push_back({{"lambda0", r.lambda0},
                        {"l", r.l},
                        {"j", r.j},
                        {"boundary_data", r.boundary_data},
                        {"mult", r.mult_geometric}});
    const json doc = {{"version", kCacheVersion}, {"key", key}, {"records", recs}};

    std::lock_guard<std::mutex> lock(write_mutex_);
    const std::string final_path = path(key);
    std::ostringstream tid;
    tid << std::this_thread::get_id();
    const std::string tmp = final_path + ".tmp" + tid.str();
    {
        std::ofstream out(tmp);
        if (!out) fail(ErrorKind::ConfigError, "cannot write cache entry " + tmp);
        out << doc.dump();
    }
    std::error_code ec;
    fs::rename(tmp, final_path, ec);
    if (ec) fail(ErrorKind::ConfigError, "cannot finalize cache entry " + final_path + ": " + ec.message());
}

std::vector<DirichletEigenRecord> SpectrumCache::spectrum(const WarpedManifold& m, int l, double lambda_max,
                                                          const Tolerances& tol) {
    const std::string k = key(m, l, lambda_max, tol);
    if (auto hit = load(k)) {
        std::lock_guard<std::mutex> lock(count_mutex_);
        ++hits_;
        return *hit;
    }
    auto recs = dirichlet_spectrum_mode(m, l, lambda_max, tol);
    store(k, recs);
    std::lock_guard<std::mutex> lock(count_mutex_);
    ++misses_;
    return recs;
}

}  // namespace warpite::app
