#pragma once

#include <cstddef>
#include <span>

#include "mcgta/types.hpp"
#include "mcgta/variogram.hpp"

namespace mcgta {

struct PenaltyParams {
    double beta = 1.0;   // constraint strength, ≥ 0
    double delta = 0.0;  // margin; shifts the threshold curve down (may be negative)
    bool range_conditioned = true;
};

void validate(const PenaltyParams& params);

/// Expected W₂² of a pair at metric distance d_c: twice the semivariance.
double penalty_threshold(const TheoreticalVariogram& tv, double d_c);

/// max(0, w2 − (2·γ(d_c) − δ)); zero beyond the range when range-conditioned.
double hinge_penalty(double w2, double d_c, const TheoreticalVariogram& tv, const PenaltyParams& params);

struct PenaltyStats {
    std::size_t evaluations = 0;  // hinge evaluations performed
    std::size_t active = 0;       // evaluations with a positive penalty
};

/// M^w(i, j) = d_m(i, j) + β·r(i, j). Pairs beyond the range are not
/// evaluated at all when range-conditioned; β = 0 returns d_m untouched.
WeightedDistanceMatrix build_weighted_matrix(const ModelDistanceMatrix& dm, std::span<const Position> positions,
                                             MetricKind kind, const TheoreticalVariogram& tv,
                                             const PenaltyParams& params, PenaltyStats* stats = nullptr);

/// Loss summed over unordered intra-cluster pairs; noise points excluded.
struct LossReport {
    double total_loss = 0.0;
    double w2_term = 0.0;
    double penalty_term = 0.0;
    std::size_t pairs = 0;
};

LossReport loss_report(const WeightedDistanceMatrix& mw, const ModelDistanceMatrix& dm,
                       const ClusterAssignment& assignment);

}  // namespace mcgta
