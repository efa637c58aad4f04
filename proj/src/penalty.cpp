#include "mcgta/penalty.hpp"

#include <cmath>
#include <map>

#include "mcgta/metric_space.hpp"

namespace mcgta {

void validate(const PenaltyParams& params) {
    if (!(params.beta >= 0.0) || !std::isfinite(params.beta)) throw InvalidInput("beta must be finite and >= 0");
    if (std::isnan(params.delta)) throw InvalidInput("delta must not be NaN");
}

double penalty_threshold(const TheoreticalVariogram& tv, double d_c) { return 2.0 * eval_theoretical(tv, d_c); }

double hinge_penalty(double w2, double d_c, const TheoreticalVariogram& tv, const PenaltyParams& params) {
    if (params.range_conditioned && d_c > tv.range) return 0.0;
    return std::max(0.0, w2 - (penalty_threshold(tv, d_c) - params.delta));
}

WeightedDistanceMatrix build_weighted_matrix(const ModelDistanceMatrix& dm, std::span<const Position> positions,
                                             MetricKind kind, const TheoreticalVariogram& tv,
                                             const PenaltyParams& params, PenaltyStats* stats) {
    validate(params);
    const Eigen::Index n = dm.n();
    if (n != static_cast<Eigen::Index>(positions.size())) {
        throw InvalidInput("build_weighted_matrix: distance matrix and positions disagree on N");
    }
    if (params.beta == 0.0) return WeightedDistanceMatrix(dm.matrix());

    PenaltyStats local;
    WeightedDistanceMatrix mw(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double w2 = dm(i, j);
            const double d_c = distance(positions[i], positions[j], kind);
            double r = 0.0;
            if (!params.range_conditioned || d_c <= tv.range) {
                r = hinge_penalty(w2, d_c, tv, params);
                ++local.evaluations;
                local.active += (r > 0.0);
            }
            mw.set(i, j, w2 + params.beta * r);
        }
    }
    if (stats) {
        stats->evaluations += local.evaluations;
        stats->active += local.active;
    }
    return mw;
}

LossReport loss_report(const WeightedDistanceMatrix& mw, const ModelDistanceMatrix& dm,
                       const ClusterAssignment& assignment) {
    const auto n = static_cast<Eigen::Index>(assignment.labels.size());
    if (mw.n() != n || dm.n() != n) throw InvalidInput("loss_report: assignment does not cover the matrix");

    std::map<int, std::vector<Eigen::Index>> members;
    for (Eigen::Index i = 0; i < n; ++i) {
        const int l = assignment.labels[static_cast<std::size_t>(i)];
        if (l != kNoiseLabel) members[l].push_back(i);
    }
    LossReport rep;
    for (const auto& [label, idx] : members) {
        for (std::size_t a = 0; a < idx.size(); ++a) {
            for (std::size_t b = a + 1; b < idx.size(); ++b) {
                const double w2 = dm(idx[a], idx[b]);
                rep.w2_term += w2;
                rep.penalty_term += mw(idx[a], idx[b]) - w2;
                ++rep.pairs;
            }
        }
    }
    rep.total_loss = rep.w2_term + rep.penalty_term;
    return rep;
}

}  // namespace mcgta
