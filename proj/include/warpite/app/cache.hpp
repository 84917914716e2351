#pragma once

#include "warpite/manifold.hpp"
#include "warpite/radial.hpp"
#include "warpite/tolerances.hpp"

#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace warpite::app {

inline constexpr const char* kCacheVersion = "warpite-spectrum-1";

// On-disk store of per-mode Dirichlet spectra. Entries are immutable once written; writes go through one mutex
// and land via rename, so concurrent readers only ever see complete files.
class SpectrumCache {
public:
    explicit SpectrumCache(std::string dir);  // empty dir disables the cache
    bool enabled() const { return !dir_.empty(); }

    static std::string key(const WarpedManifold& m, int l, double lambda_max, const Tolerances& tol);
    std::optional<std::vector<DirichletEigenRecord>> load(const std::string& key) const;
    void store(const std::string& key, const std::vector<DirichletEigenRecord>& records);

    // Cached dirichlet_spectrum_mode.
    std::vector<DirichletEigenRecord> spectrum(const WarpedManifold& m, int l, double lambda_max,
                                               const Tolerances& tol);

    int hits() const { return hits_; }
    int misses() const { return misses_; }

private:
    std::string path(const std::string& key) const;

    std::string dir_;
    std::mutex write_mutex_;
    mutable std::mutex count_mutex_;
    mutable int hits_ = 0, misses_ = 0;
};

}  // namespace warpite::app
