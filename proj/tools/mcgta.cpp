// mcgta: command-line front end for metric-constrained model-based clustering.

#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mcgta/evaluation.hpp"
#include "mcgta/io/dataset_csv.hpp"
#include "mcgta/io/model_cache.hpp"
#include "mcgta/io/run_config.hpp"
#include "mcgta/io/sweep.hpp"
#include "mcgta/metric_space.hpp"
#include "mcgta/pipeline.hpp"
#include "mcgta/synthetic.hpp"

namespace fs = std::filesystem;
using namespace mcgta;

namespace {

enum ExitCode { kOk = 0, kConfigError = 2, kComputeError = 3, kIoError = 4 };

// Flag values; each is applied only when given on the command line.
struct PipelineFlags {
    std::string config_path;
    std::string metric;
    Eigen::Index n_neighbors = 0;
    std::string estimator;
    double lambda_g = 0.0;
    double alpha_s = 0.0;
    int n_bins = 0;
    double max_dist_fraction = 0.0;
    std::string family;
    double beta = 0.0;
    double delta = 0.0;
    bool unconditioned = false;
    double eps = 0.0;
    double eps_percentile = 0.0;
    int min_samples = 0;
    std::uint64_t seed = 0;
    std::string cache;

    std::vector<std::pair<std::string, CLI::Option*>> opts;

    void add_to(CLI::App& app, bool clustering) {
        auto add = [&](const std::string& key, CLI::Option* o) { opts.emplace_back(key, o); };
        app.add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
        add("metric", app.add_option("--metric", metric, "absolute_index | euclidean | geodesic"));
        add("n_neighbors", app.add_option("--n-neighbors", n_neighbors, "neighbors per model fit"));
        add("estimator", app.add_option("--estimator", estimator, "glasso | shrunk"));
        add("lambda_g", app.add_option("--lambda-g", lambda_g, "graphical lasso regularization"));
        add("alpha_s", app.add_option("--alpha-s", alpha_s, "shrinkage coefficient"));
        add("cache", app.add_option("--cache", cache, "model cache file"));
        if (!clustering) return;
        add("n_bins", app.add_option("--n-bins", n_bins, "variogram bins"));
        add("max_dist_fraction", app.add_option("--max-dist-fraction", max_dist_fraction, "variogram distance cutoff"));
        add("family", app.add_option("--family", family, "spherical | exponential"));
        add("beta", app.add_option("--beta", beta, "constraint strength"));
        add("delta", app.add_option("--delta", delta, "margin"));
        add("range_conditioned", app.add_flag("--no-range-condition", unconditioned, "penalize beyond the range too"));
        add("eps", app.add_option("--eps", eps, "DBSCAN radius (default: percentile heuristic)"));
        add("eps_percentile", app.add_option("--eps-percentile", eps_percentile, "percentile for the eps heuristic"));
        add("min_samples", app.add_option("--min-samples", min_samples, "DBSCAN min_samples"));
        add("seed", app.add_option("--seed", seed, "variogram fit seed"));
    }

    io::RunConfig resolve() const {
        io::RunConfig cfg;
        if (!config_path.empty()) cfg = io::load_run_config(config_path);
        nlohmann::json overrides = nlohmann::json::object();
        for (const auto& [key, opt] : opts) {
            if (opt->count() == 0) continue;
            if (key == "metric") overrides[key] = metric;
            else if (key == "n_neighbors") overrides[key] = n_neighbors;
            else if (key == "estimator") overrides[key] = estimator;
            else if (key == "lambda_g") overrides[key] = lambda_g;
            else if (key == "alpha_s") overrides[key] = alpha_s;
            else if (key == "cache") overrides[key] = cache;
            else if (key == "n_bins") overrides[key] = n_bins;
            else if (key == "max_dist_fraction") overrides[key] = max_dist_fraction;
            else if (key == "family") overrides[key] = family;
            else if (key == "beta") overrides[key] = beta;
            else if (key == "delta") overrides[key] = delta;
            else if (key == "range_conditioned") overrides[key] = !unconditioned;
            else if (key == "eps") overrides[key] = eps;
            else if (key == "eps_percentile") overrides[key] = eps_percentile;
            else if (key == "min_samples") overrides[key] = min_samples;
            else if (key == "seed") overrides[key] = seed;
        }
        return io::config_from_json(overrides, cfg);
    }
};

struct Loaded {
    io::LoadedDataset data;
    std::uint64_t hash = 0;
};

Loaded load(const std::string& path, MetricKind metric) {
    const std::string bytes = io::read_file(path);
    return {io::parse_dataset(bytes, metric), io::fnv1a64(bytes)};
}

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw InvalidInput("grid value '" + item + "' is not a number");
        }
    }
    if (out.empty()) throw InvalidInput("grid is empty");
    return out;
}

nlohmann::json diagnostics_json(const Diagnostics& d) {
    return {{"range", d.range},
            {"eps", d.eps},
            {"clusters", d.clusters},
            {"noise", d.noise},
            {"models_from_cache", d.models_from_cache},
            {"model_fit_passes", d.fit.passes},
            {"glasso_fallbacks", d.fit.fallbacks},
            {"penalty_evaluations", d.penalty.evaluations},
            {"loss", {{"total", d.loss.total_loss}, {"w2", d.loss.w2_term}, {"penalty", d.loss.penalty_term}}},
            {"seconds",
             {{"fit", d.seconds.fit},
              {"pairwise", d.seconds.pairwise},
              {"variogram", d.seconds.variogram},
              {"penalty", d.seconds.penalty},
              {"clustering", d.seconds.clustering}}}};
}

int exit_code_for(const std::exception& e) {
    try {
        std::rethrow_if_nested(e);
    } catch (const std::exception& inner) {
        return exit_code_for(inner);
    }
    if (dynamic_cast<const ParseError*>(&e) || dynamic_cast<const InvalidInput*>(&e)) return kConfigError;
    if (dynamic_cast<const IoError*>(&e) || dynamic_cast<const CacheCorrupt*>(&e)) return kIoError;
    if (dynamic_cast<const Error*>(&e)) return kComputeError;
    if (dynamic_cast<const fs::filesystem_error*>(&e)) return kIoError;
    return kComputeError;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Metric-constrained model-based clustering with semivariogram-aware penalties"};
    app.require_subcommand(1);

    std::string data_path, out_path, variogram_path, diagnostics_path;

    // fit
    PipelineFlags fit_flags;
    auto* fit = app.add_subcommand("fit", "fit per-observation Gaussian models and write the model cache");
    fit->add_option("--data", data_path, "dataset CSV")->required()->check(CLI::ExistingFile);
    fit_flags.add_to(*fit, false);

    // cluster
    PipelineFlags cluster_flags;
    auto* cluster = app.add_subcommand("cluster", "run the full pipeline and write labels");
    cluster->add_option("--data", data_path, "dataset CSV")->required()->check(CLI::ExistingFile);
    cluster->add_option("--out", out_path, "labels CSV")->required();
    cluster->add_option("--variogram", variogram_path, "also dump the variogram CSV (+ JSON sidecar)");
    cluster->add_option("--diagnostics", diagnostics_path, "write run diagnostics as JSON");
    cluster_flags.add_to(*cluster, true);

    // variogram
    PipelineFlags vario_flags;
    auto* vario = app.add_subcommand("variogram", "dump the empirical and fitted variogram");
    vario->add_option("--data", data_path, "dataset CSV")->required()->check(CLI::ExistingFile);
    vario->add_option("--out", out_path, "variogram CSV")->required();
    vario_flags.add_to(*vario, true);

    // sweep
    PipelineFlags sweep_flags;
    std::string betas = "0,0.5,1", deltas = "0";
    auto* sweep_cmd = app.add_subcommand("sweep", "grid over beta and delta reusing fitted models");
    sweep_cmd->add_option("--data", data_path, "dataset CSV")->required()->check(CLI::ExistingFile);
    sweep_cmd->add_option("--out", out_path, "sweep table CSV")->required();
    sweep_cmd->add_option("--betas", betas, "comma-separated beta grid")->capture_default_str();
    sweep_cmd->add_option("--deltas", deltas, "comma-separated delta grid")->capture_default_str();
    sweep_cmd->add_option("--diagnostics", diagnostics_path, "write shared-stage diagnostics as JSON");
    sweep_flags.add_to(*sweep_cmd, true);

    // synth
    SynthConfig synth_cfg;
    std::string synth_kind = "temporal";
    auto* synth = app.add_subcommand("synth", "generate a synthetic temporal or spatial dataset");
    synth->add_option("--kind", synth_kind, "temporal | spatial")->check(CLI::IsMember({"temporal", "spatial"}));
    synth->add_option("--clusters,-K", synth_cfg.clusters, "cluster count")->capture_default_str();
    synth->add_option("--dim,-D", synth_cfg.dim, "feature dimension")->capture_default_str();
    synth->add_option("--noise", synth_cfg.noise, "noise scale alpha")->capture_default_str();
    synth->add_option("--batch", synth_cfg.batch, "samples per perturbed covariance (temporal)")->capture_default_str();
    synth->add_option("--seed", synth_cfg.seed, "RNG seed")->capture_default_str();
    synth->add_option("--out", out_path, "dataset CSV (with label column)")->required();

    // eval
    std::string truth_path, pred_path;
    auto* eval = app.add_subcommand("eval", "ARI and NMI between two label files");
    eval->add_option("--truth", truth_path, "CSV with a label column")->required()->check(CLI::ExistingFile);
    eval->add_option("--pred", pred_path, "CSV with a label column")->required()->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kConfigError;
    }

    try {
        if (*fit) {
            const auto cfg = fit_flags.resolve();
            if (!cfg.cache) throw InvalidInput("fit: --cache (or 'cache' in the config) is required");
            const auto loaded = load(data_path, cfg.pipeline.metric);
            FitStats stats;
            const auto models = fit_all_models(loaded.data.observations, cfg.pipeline.n_neighbors, cfg.pipeline.estimator,
                                               cfg.pipeline.metric, &stats);
            io::cache_models(*cfg.cache, io::cache_header_for(loaded.hash, loaded.data.observations, cfg.pipeline), models);
            std::cout << "fitted " << stats.fits << " models (" << stats.fallbacks << " glasso fallbacks) -> "
                      << cfg.cache->string() << "\n";
        } else if (*cluster) {
            const auto cfg = cluster_flags.resolve();
            const auto loaded = load(data_path, cfg.pipeline.metric);
            const auto prepared = io::prepare_with_cache(loaded.data.observations, loaded.hash, cfg.pipeline, cfg.cache);
            const auto res = cluster_prepared(prepared, cfg.pipeline);
            io::save_labels(out_path, res.assignment);
            if (!variogram_path.empty()) io::dump_variogram(variogram_path, res.empirical, res.theoretical);
            nlohmann::json diag = diagnostics_json(res.diagnostics);
            std::cout << "clusters=" << res.diagnostics.clusters << " noise=" << res.diagnostics.noise
                      << " range=" << res.diagnostics.range << " eps=" << res.diagnostics.eps;
            if (loaded.data.truth) {
                const double a = ari(*loaded.data.truth, res.assignment.labels);
                const double m = nmi(*loaded.data.truth, res.assignment.labels);
                diag["ari"] = a;
                diag["nmi"] = m;
                std::cout << " ari=" << a << " nmi=" << m;
            }
            std::cout << "\n";
            if (!diagnostics_path.empty()) io::write_file_atomic(diagnostics_path, diag.dump(2) + "\n");
        } else if (*vario) {
            const auto cfg = vario_flags.resolve();
            const auto loaded = load(data_path, cfg.pipeline.metric);
            const auto prepared = io::prepare_with_cache(loaded.data.observations, loaded.hash, cfg.pipeline, cfg.cache);
            const auto side = io::dump_variogram(out_path, prepared.empirical, prepared.theoretical);
            const auto& tv = prepared.theoretical;
            std::cout << "nugget=" << tv.nugget << " sill=" << tv.sill << " range=" << tv.range << " ("
                      << to_string(tv.family) << ") -> " << out_path << ", " << side.string() << "\n";
        } else if (*sweep_cmd) {
            const auto cfg = sweep_flags.resolve();
            const auto beta_grid = parse_grid(betas);
            const auto delta_grid = parse_grid(deltas);
            const auto loaded = load(data_path, cfg.pipeline.metric);
            const auto prepared = io::prepare_with_cache(loaded.data.observations, loaded.hash, cfg.pipeline, cfg.cache);
            const auto result = io::sweep(prepared, cfg.pipeline, beta_grid, delta_grid, loaded.data.truth);
            io::write_sweep_csv(out_path, result);
            if (!diagnostics_path.empty()) {
                io::write_file_atomic(diagnostics_path, diagnostics_json(result.prepare_diagnostics).dump(2) + "\n");
            }
            std::size_t failed = 0;
            for (const auto& r : result.rows) failed += !r.error.empty();
            std::cout << result.rows.size() << " grid points (" << failed << " failed), model fit passes: "
                      << result.prepare_diagnostics.fit.passes << " -> " << out_path << "\n";
        } else if (*synth) {
            const SynthDataset ds = synth_kind == "temporal" ? gen_temporal(synth_cfg) : gen_spatial(synth_cfg);
            io::save_dataset(out_path, ds.observations, ds.truth);
            std::cout << "wrote " << ds.observations.size() << " observations -> " << out_path << "\n";
        } else if (*eval) {
            const auto truth = io::load_labels(truth_path);
            const auto pred = io::load_labels(pred_path);
            std::cout << "ari=" << ari(truth, pred) << " nmi=" << nmi(truth, pred) << "\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    }
    return kOk;
}
