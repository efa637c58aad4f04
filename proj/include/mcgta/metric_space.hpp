#pragma once

#include <span>
#include <string>
#include <vector>

#include "mcgta/types.hpp"

namespace mcgta {

/// Number of coordinates a position must carry for the metric.
int metric_dims(MetricKind kind);

std::string to_string(MetricKind kind);
/// Accepts "absolute_index", "euclidean", "geodesic".
MetricKind metric_from_string(const std::string& name);

/// d_c(a, b). Geodesic distances are great-circle radians on the unit sphere
/// via the haversine formula.
double distance(const Position& a, const Position& b, MetricKind kind);

/// Validates every position against the metric (dimension, lon/lat bounds).
void check_positions(std::span<const Position> positions, MetricKind kind);

/// Indices of the k positions closest to positions[query], the query itself
/// excluded. Ties go to the lower index. Output is sorted by (distance, index).
std::vector<Eigen::Index> knn(Eigen::Index query, std::span<const Position> positions, Eigen::Index k,
                              MetricKind kind);

std::vector<Position> positions_of(const Dataset& dataset);

/// Largest pairwise metric distance. O(N²).
double max_pairwise_distance(std::span<const Position> positions, MetricKind kind);

}  // namespace mcgta
