#include "mcgta/pipeline.hpp"

#include <chrono>
#include <exception>

#include "mcgta/metric_space.hpp"
#include "mcgta/wasserstein.hpp"

namespace mcgta {

void validate(const PipelineConfig& config) {
    if (config.n_neighbors < 1) throw InvalidInput("n_neighbors must be positive");
    validate(config.estimator);
    validate(config.penalty);
    if (config.binning.n_bins < 3) throw InvalidInput("n_bins must be >= 3");
    if (!(config.binning.max_dist_fraction > 0.0 && config.binning.max_dist_fraction <= 1.0)) {
        throw InvalidInput("max_dist_fraction must be in (0, 1]");
    }
    if (config.eps && !(*config.eps > 0.0)) throw InvalidInput("eps must be positive");
    if (!(config.eps_percentile >= 0.0 && config.eps_percentile <= 100.0)) {
        throw InvalidInput("eps_percentile must be in [0, 100]");
    }
    if (config.min_samples < 1) throw InvalidInput("min_samples must be >= 1");
}

namespace {

template <typename F>
auto timed(const char* stage, double& seconds, F&& f) {
    const auto start = std::chrono::steady_clock::now();
    try {
        auto out = f();
        seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return out;
    } catch (const std::exception& e) {
        std::throw_with_nested(StageError(stage, e.what()));
    }
}

}  // namespace

PreparedData prepare(const Dataset& dataset, const PipelineConfig& config,
                     std::optional<std::vector<FittedGaussian>> cached_models) {
    validate(config);
    if (static_cast<Eigen::Index>(dataset.size()) < config.n_neighbors + 1) {
        throw InvalidInput("dataset needs at least n_neighbors + 1 observations");
    }
    PreparedData out;
    out.metric = config.metric;
    out.positions = positions_of(dataset);
    check_positions(out.positions, config.metric);

    if (cached_models) {
        if (cached_models->size() != dataset.size()) throw InvalidInput("cached model count does not match dataset");
        out.models = std::move(*cached_models);
        out.diagnostics.models_from_cache = true;
    } else {
        out.models = timed("fit_models", out.diagnostics.seconds.fit, [&] {
            return fit_all_models(dataset, config.n_neighbors, config.estimator, config.metric, &out.diagnostics.fit);
        });
    }
    out.dm = timed("pairwise_w2", out.diagnostics.seconds.pairwise, [&] { return pairwise_w2(out.models); });

    double t_emp = 0.0, t_fit = 0.0;
    out.empirical = timed("empirical_variogram", t_emp, [&] {
        return build_empirical(out.dm, out.positions, config.metric, config.binning);
    });
    out.theoretical = timed("fit_variogram", t_fit, [&] {
        VariogramFitOptions opts;
        opts.seed = config.seed;
        return fit_theoretical(out.empirical, config.family, opts);
    });
    out.diagnostics.seconds.variogram = t_emp + t_fit;
    out.diagnostics.range = out.theoretical.range;
    return out;
}

PipelineResult cluster_prepared(const PreparedData& prepared, const PipelineConfig& config) {
    validate(config);
    PipelineResult res;
    res.empirical = prepared.empirical;
    res.theoretical = prepared.theoretical;
    res.diagnostics = prepared.diagnostics;
    Diagnostics& diag = res.diagnostics;
    diag.penalty = {};

    const WeightedDistanceMatrix mw = timed("penalty", diag.seconds.penalty, [&] {
        return build_weighted_matrix(prepared.dm, prepared.positions, prepared.metric, prepared.theoretical,
                                     config.penalty, &diag.penalty);
    });
    res.assignment = timed("clustering", diag.seconds.clustering, [&] {
        double eps = config.eps ? *config.eps : eps_from_percentile(mw, config.eps_percentile);
        if (!(eps > 0.0)) eps = 1e-12;
        diag.eps = eps;
        return dbscan_precomputed(mw, {eps, config.min_samples});
    });
    diag.loss = loss_report(mw, prepared.dm, res.assignment);
    diag.clusters = res.assignment.cluster_count();
    diag.noise = res.assignment.noise_count();
    return res;
}

PipelineResult run_pipeline(const Dataset& dataset, const PipelineConfig& config) {
    return cluster_prepared(prepare(dataset, config), config);
}

}  // namespace mcgta
