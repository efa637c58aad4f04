#include "mcgta/io/sweep.hpp"

#include "mcgta/evaluation.hpp"
#include "mcgta/io/dataset_csv.hpp"
#include "mcgta/logging.hpp"
#include "mcgta/metric_space.hpp"

namespace mcgta::io {

CacheHeader cache_header_for(std::uint64_t dataset_hash, const Dataset& dataset, const PipelineConfig& config) {
    CacheHeader h;
    h.dataset_hash = dataset_hash;
    h.n = static_cast<std::int64_t>(dataset.size());
    h.dim = dataset.empty() ? 0 : static_cast<std::int64_t>(dataset.front().features.size());
    h.n_neighbors = static_cast<std::int64_t>(config.n_neighbors);
    h.estimator = estimator_id(config.estimator);
    h.regularization = estimator_regularization(config.estimator);
    h.metric = to_string(config.metric);
    return h;
}

PreparedData prepare_with_cache(const Dataset& dataset, std::uint64_t dataset_hash, const PipelineConfig& config,
                                const std::optional<std::filesystem::path>& cache) {
    if (!cache) return prepare(dataset, config);
    const CacheHeader header = cache_header_for(dataset_hash, dataset, config);
    std::optional<std::vector<FittedGaussian>> models;
    try {
        models = load_cached_models(*cache, header);
    } catch (const CacheCorrupt& e) {
        warn(std::string(e.what()) + "; refitting");
    }
    if (models) return prepare(dataset, config, std::move(models));
    PreparedData prepared = prepare(dataset, config);
    cache_models(*cache, header, prepared.models);
    return prepared;
}

SweepResult sweep(const PreparedData& prepared, const PipelineConfig& base, std::span<const double> betas,
                  std::span<const double> deltas, const std::optional<std::vector<int>>& truth) {
    if (betas.empty() || deltas.empty()) throw InvalidInput("sweep: beta and delta grids must be non-empty");
    if (truth && truth->size() != prepared.positions.size()) throw InvalidInput("sweep: truth length mismatch");
    SweepResult out;
    out.prepare_diagnostics = prepared.diagnostics;
    for (double beta : betas) {
        for (double delta : deltas) {
            SweepRow row;
            row.beta = beta;
            row.delta = delta;
            try {
                PipelineConfig cfg = base;
                cfg.penalty.beta = beta;
                cfg.penalty.delta = delta;
                const PipelineResult res = cluster_prepared(prepared, cfg);
                row.clusters = res.diagnostics.clusters;
                row.noise_fraction = double(res.diagnostics.noise) / double(res.assignment.labels.size());
                row.total_loss = res.diagnostics.loss.total_loss;
                if (truth) {
                    row.ari = ari(*truth, res.assignment.labels);
                    row.nmi = nmi(*truth, res.assignment.labels);
                }
            } catch (const std::exception& e) {
                row.error = e.what();
            }
            out.rows.push_back(std::move(row));
        }
    }
    return out;
}

void write_sweep_csv(const std::filesystem::path& path, const SweepResult& result) {
    std::string s = "beta,delta,ari,nmi,clusters,noise_fraction,total_loss,error\n";
    for (const auto& r : result.rows) {
        s += format_double(r.beta) + "," + format_double(r.delta) + ",";
        s += (r.ari ? format_double(*r.ari) : "") + "," + (r.nmi ? format_double(*r.nmi) : "") + ",";
        if (r.error.empty()) {
            s += std::to_string(r.clusters) + "," + format_double(r.noise_fraction) + "," + format_double(r.total_loss) + ",";
        } else {
            std::string msg = r.error;
            for (char& c : msg) {
                if (c == ',' || c == '\n' || c == '"') c = ';';
            }
            s += ",,," + msg;
        }
        s += "\n";
    }
    write_file_atomic(path, s);
}

}  // namespace mcgta::io
