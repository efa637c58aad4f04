#pragma once

#include <cstdint>
#include <vector>

#include "mcgta/spd_math.hpp"
#include "mcgta/types.hpp"

namespace mcgta {

struct SynthConfig {
    int clusters = 5;            // K
    int dim = 5;                 // D
    double noise = 0.02;         // α
    int batch = 2;               // samples drawn per perturbed covariance (temporal only)
    std::uint64_t seed = 1;

    // Ranges for the quantities drawn at random.
    int min_segments = 20, max_segments = 60;            // temporal segment count
    int min_segment_length = 5, max_segment_length = 20; // perturbed covariances per segment
    int min_cluster_size = 100, max_cluster_size = 500;  // spatial
    double extent = 10.0;                                // spatial centers uniform in [0, extent]²
    double min_spread = 0.1, max_spread = 1.0;           // eigenvalue range of spatial 2×2 covariances
};

void validate(const SynthConfig& config);

struct SynthDataset {
    Dataset observations;
    std::vector<int> truth;
    std::vector<SymMatrix> ground_truth_covs;  // one per cluster
};

inline constexpr double kMinClusterSeparation = 1.0;  // pairwise W₂² between ground-truth covariances
inline constexpr int kMaxCovarianceAttempts = 1000;

/// K covariances G·Gᵀ/D + 0.1·I (G standard normal) whose pairwise W₂²
/// under zero means all exceed kMinClusterSeparation. Candidates are drawn
/// one at a time and rejected on conflict; throws GenerationFailure after
/// kMaxCovarianceAttempts draws.
std::vector<SymMatrix> gen_ground_truth_covs(int clusters, int dim, std::uint64_t seed);

/// Temporal dataset: random segments, each a run of covariances drifting away
/// from its cluster's ground truth with growing noise; positions 0, 1, 2, ...
SynthDataset gen_temporal(const SynthConfig& config);

/// Spatial dataset: Gaussian blobs of positions around random centers, with
/// feature noise growing with distance from the center.
SynthDataset gen_spatial(const SynthConfig& config);

}  // namespace mcgta
