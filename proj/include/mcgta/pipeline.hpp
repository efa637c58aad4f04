#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mcgta/clustering.hpp"
#include "mcgta/gmrf_estimation.hpp"
#include "mcgta/penalty.hpp"
#include "mcgta/types.hpp"
#include "mcgta/variogram.hpp"

namespace mcgta {

/// Every tunable of the clustering pipeline.
struct PipelineConfig {
    MetricKind metric = MetricKind::euclidean;
    Eigen::Index n_neighbors = 20;
    EstimatorKind estimator = GlassoEstimator{0.01};
    BinningOptions binning;
    VariogramFamily family = VariogramFamily::spherical;
    PenaltyParams penalty;
    std::optional<double> eps;   // explicit DBSCAN radius
    double eps_percentile = 10.0;  // used when eps is unset
    int min_samples = 5;
    std::uint64_t seed = 0x5eed'1234ULL;  // variogram multi-start seed
};

void validate(const PipelineConfig& config);

struct StageTimes {
    double fit = 0.0;
    double pairwise = 0.0;
    double variogram = 0.0;
    double penalty = 0.0;
    double clustering = 0.0;
};

struct Diagnostics {
    double range = 0.0;
    double eps = 0.0;
    StageTimes seconds;
    LossReport loss;
    FitStats fit;
    bool models_from_cache = false;
    PenaltyStats penalty;
    int clusters = 0;
    std::size_t noise = 0;
};

/// Stages that do not depend on β, δ or the DBSCAN parameters: model fit,
/// pairwise W₂², metric positions and the fitted variogram.
struct PreparedData {
    std::vector<FittedGaussian> models;
    ModelDistanceMatrix dm;
    std::vector<Position> positions;
    MetricKind metric = MetricKind::euclidean;
    EmpiricalVariogram empirical;
    TheoreticalVariogram theoretical;
    Diagnostics diagnostics;
};

struct PipelineResult {
    ClusterAssignment assignment;
    EmpiricalVariogram empirical;
    TheoreticalVariogram theoretical;
    Diagnostics diagnostics;
};

/// Fits the models (or adopts `cached_models`), then computes d_m and the
/// variogram. Errors are rethrown nested inside a StageError naming the stage.
PreparedData prepare(const Dataset& dataset, const PipelineConfig& config,
                     std::optional<std::vector<FittedGaussian>> cached_models = std::nullopt);

/// Penalty + DBSCAN on already prepared data.
PipelineResult cluster_prepared(const PreparedData& prepared, const PipelineConfig& config);

PipelineResult run_pipeline(const Dataset& dataset, const PipelineConfig& config);

}  // namespace mcgta
