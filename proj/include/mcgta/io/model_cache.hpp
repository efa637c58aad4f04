#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mcgta/types.hpp"

namespace mcgta::io {

inline constexpr int kCacheFormatVersion = 1;

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::span<const unsigned char> bytes);
std::uint64_t fnv1a64(const std::string& bytes);
std::uint64_t hash_file(const std::filesystem::path& path);

/// Everything a cached model set depends on.
struct CacheHeader {
    int format_version = kCacheFormatVersion;
    std::uint64_t dataset_hash = 0;
    std::int64_t n = 0;
    std::int64_t dim = 0;
    std::int64_t n_neighbors = 0;
    std::string estimator;
    double regularization = 0.0;
    std::string metric;

    friend bool operator==(const CacheHeader&, const CacheHeader&) = default;
};

/// One JSON header line, then per model μ (d values) and Σ (d² values,
/// row-major) as little-endian float64.
void cache_models(const std::filesystem::path& path, const CacheHeader& header,
                  std::span<const FittedGaussian> models);

CacheHeader read_cache_header(const std::filesystem::path& path);

/// Models when the file exists and its header equals `expected`; nullopt
/// (with a warning on mismatch) otherwise. Throws CacheCorrupt when the
/// payload length disagrees with the header.
std::optional<std::vector<FittedGaussian>> load_cached_models(const std::filesystem::path& path,
                                                              const CacheHeader& expected);

}  // namespace mcgta::io
