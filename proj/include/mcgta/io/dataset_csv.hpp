#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mcgta/types.hpp"
#include "mcgta/variogram.hpp"

namespace mcgta::io {

struct LoadedDataset {
    Dataset observations;
    std::optional<std::vector<int>> truth;  // present when the file has a `label` column
};

/// Reads `p0..p{M-1}, f0..f{F-1}[, label]` with a header row. For the
/// absolute_index metric the position columns may be omitted, in which case
/// the row index is the position. Throws ParseError naming the 1-based data row.
LoadedDataset load_dataset(const std::filesystem::path& path, MetricKind kind);

/// Parses dataset CSV text already in memory.
LoadedDataset parse_dataset(const std::string& text, MetricKind kind);

void save_dataset(const std::filesystem::path& path, const Dataset& dataset,
                  const std::optional<std::vector<int>>& truth = std::nullopt);

/// `index,label` rows; noise written as -1.
void save_labels(const std::filesystem::path& path, const ClusterAssignment& assignment);

/// Reads the `label` column of any CSV with a header (labels or dataset files).
std::vector<int> load_labels(const std::filesystem::path& path);

/// CSV of bin_center,count,empirical_semivariance,theoretical_value plus a
/// JSON sidecar (same stem, .json) holding nugget, sill, range and family.
/// Returns the sidecar path.
std::filesystem::path dump_variogram(const std::filesystem::path& path, const EmpiricalVariogram& emp,
                                     const TheoreticalVariogram& tv);

std::filesystem::path variogram_sidecar_path(const std::filesystem::path& csv_path);
TheoreticalVariogram load_variogram_sidecar(const std::filesystem::path& json_path);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

std::string read_file(const std::filesystem::path& path);
/// Writes to a sibling temporary file, then renames over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace mcgta::io
