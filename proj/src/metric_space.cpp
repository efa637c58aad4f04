#include "mcgta/metric_space.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

namespace mcgta {

int metric_dims(MetricKind kind) {
    switch (kind) {
        case MetricKind::absolute_index: return 1;
        case MetricKind::euclidean: return -1;  // 1 or 2
        case MetricKind::geodesic: return 2;
    }
    return -1;
}

std::string to_string(MetricKind kind) {
    switch (kind) {
        case MetricKind::absolute_index: return "absolute_index";
        case MetricKind::euclidean: return "euclidean";
        case MetricKind::geodesic: return "geodesic";
    }
    return "unknown";
}

MetricKind metric_from_string(const std::string& name) {
    if (name == "absolute_index") return MetricKind::absolute_index;
    if (name == "euclidean") return MetricKind::euclidean;
    if (name == "geodesic") return MetricKind::geodesic;
    throw InvalidInput("unknown metric kind '" + name + "'");
}

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

void check_dims(const Position& p, MetricKind kind) {
    const int want = metric_dims(kind);
    if (want < 0 ? (p.size() < 1 || p.size() > 2) : p.size() != want) {
        throw InvalidInput("position has " + std::to_string(p.size()) + " coordinates, metric " +
                           to_string(kind) + " needs " + (want < 0 ? std::string("1 or 2") : std::to_string(want)));
    }
}

double haversine(const Position& a, const Position& b) {
    const double lat1 = a[1] * kDegToRad;
    const double lat2 = b[1] * kDegToRad;
    const double s_lat = std::sin((lat2 - lat1) / 2.0);
    const double s_lon = std::sin((b[0] - a[0]) * kDegToRad / 2.0);
    const double h = s_lat * s_lat + std::cos(lat1) * std::cos(lat2) * s_lon * s_lon;
    return 2.0 * std::asin(std::sqrt(std::clamp(h, 0.0, 1.0)));
}

}  // namespace

double distance(const Position& a, const Position& b, MetricKind kind) {
    check_dims(a, kind);
    check_dims(b, kind);
    switch (kind) {
        case MetricKind::absolute_index: return std::abs(a[0] - b[0]);
        case MetricKind::euclidean:
            if (a.size() != b.size()) throw InvalidInput("position dimension mismatch");
            return (a - b).norm();
        case MetricKind::geodesic: return haversine(a, b);
    }
    return 0.0;
}

void check_positions(std::span<const Position> positions, MetricKind kind) {
    for (std::size_t i = 0; i < positions.size(); ++i) {
        const Position& p = positions[i];
        check_dims(p, kind);
        if (!p.allFinite()) throw InvalidInput("position " + std::to_string(i) + " is not finite");
        if (i > 0 && p.size() != positions[0].size()) throw InvalidInput("position dimension mismatch");
        if (kind == MetricKind::geodesic &&
            (std::abs(p[0]) > 180.0 || std::abs(p[1]) > 90.0)) {
            throw InvalidInput("position " + std::to_string(i) + " outside longitude/latitude bounds");
        }
    }
}

std::vector<Eigen::Index> knn(Eigen::Index query, std::span<const Position> positions, Eigen::Index k,
                              MetricKind kind) {
    const auto n = static_cast<Eigen::Index>(positions.size());
    if (query < 0 || query >= n) throw InvalidInput("knn: query index out of range");
    if (k < 1 || k >= n) throw InvalidInput("knn: k must satisfy 1 <= k < N");

    std::vector<std::pair<double, Eigen::Index>> cand;
    cand.reserve(static_cast<std::size_t>(n - 1));
    for (Eigen::Index j = 0; j < n; ++j) {
        if (j != query) cand.emplace_back(distance(positions[query], positions[j], kind), j);
    }
    std::partial_sort(cand.begin(), cand.begin() + k, cand.end());
    std::vector<Eigen::Index> out(static_cast<std::size_t>(k));
    for (Eigen::Index i = 0; i < k; ++i) out[i] = cand[i].second;
    return out;
}

std::vector<Position> positions_of(const Dataset& dataset) {
    std::vector<Position> out;
    out.reserve(dataset.size());
    for (const auto& obs : dataset) out.push_back(obs.position);
    return out;
}

double max_pairwise_distance(std::span<const Position> positions, MetricKind kind) {
    double best = 0.0;
    for (std::size_t i = 0; i < positions.size(); ++i) {
        for (std::size_t j = i + 1; j < positions.size(); ++j) {
            best = std::max(best, distance(positions[i], positions[j], kind));
        }
    }
    return best;
}

}  // namespace mcgta
