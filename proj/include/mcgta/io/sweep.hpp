#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mcgta/pipeline.hpp"
#include "mcgta/io/model_cache.hpp"

namespace mcgta::io {

CacheHeader cache_header_for(std::uint64_t dataset_hash, const Dataset& dataset, const PipelineConfig& config);

/// prepare() with the model stage served from `cache` when its header
/// matches; on a miss the models are fitted and the cache (re)written.
/// A corrupt cache is reported and refitted.
PreparedData prepare_with_cache(const Dataset& dataset, std::uint64_t dataset_hash, const PipelineConfig& config,
                                const std::optional<std::filesystem::path>& cache);

struct SweepRow {
    double beta = 0.0;
    double delta = 0.0;
    std::optional<double> ari;
    std::optional<double> nmi;
    int clusters = 0;
    double noise_fraction = 0.0;
    double total_loss = 0.0;
    std::string error;  // empty on success
};

struct SweepResult {
    std::vector<SweepRow> rows;
    Diagnostics prepare_diagnostics;  // model fit / W₂ / variogram, shared by every row
};

/// Runs penalty + clustering for every (β, δ) on one prepared dataset.
/// A failing grid point is recorded in its row and the sweep continues.
SweepResult sweep(const PreparedData& prepared, const PipelineConfig& base, std::span<const double> betas,
                  std::span<const double> deltas, const std::optional<std::vector<int>>& truth);

void write_sweep_csv(const std::filesystem::path& path, const SweepResult& result);

}  // namespace mcgta::io
