#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "mcgta/pipeline.hpp"

namespace mcgta::io {

struct RunConfig {
    PipelineConfig pipeline;
    std::optional<std::filesystem::path> cache;
};

/// Overlays the keys present in `j` on `base`. Unknown keys and values out of
/// their domain throw InvalidInput.
RunConfig config_from_json(const nlohmann::json& j, RunConfig base = {});
nlohmann::json to_json(const RunConfig& config);
RunConfig load_run_config(const std::filesystem::path& path, RunConfig base = {});

}  // namespace mcgta::io
