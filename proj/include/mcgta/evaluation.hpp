#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace mcgta {

/// Counts of (truth cluster, predicted cluster) co-occurrences.
struct ContingencyTable {
    std::vector<std::vector<std::int64_t>> counts;  // [truth][pred]
    std::vector<std::int64_t> truth_sizes;
    std::vector<std::int64_t> pred_sizes;
    std::int64_t total = 0;
};

/// Negative labels (noise) are each given a fresh singleton cluster.
ContingencyTable contingency(std::span<const int> truth, std::span<const int> pred);

/// Adjusted Rand index. 1.0 when the chance-corrected denominator vanishes
/// (both partitions trivial in the same way).
double ari(std::span<const int> truth, std::span<const int> pred);

/// Mutual information normalized by √(H(T)·H(P)), natural logs.
double nmi(std::span<const int> truth, std::span<const int> pred);

}  // namespace mcgta
