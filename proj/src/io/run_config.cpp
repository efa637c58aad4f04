#include "mcgta/io/run_config.hpp"

#include <set>

#include "mcgta/io/dataset_csv.hpp"
#include "mcgta/metric_space.hpp"

namespace mcgta::io {

namespace {

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "metric", "n_neighbors", "estimator", "lambda_g", "alpha_s", "n_bins", "max_dist_fraction", "family",
        "beta", "delta", "range_conditioned", "eps", "eps_percentile", "min_samples", "seed", "cache"};
    return keys;
}

}  // namespace

RunConfig config_from_json(const nlohmann::json& j, RunConfig base) {
    if (!j.is_object()) throw InvalidInput("config must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        if (!known_keys().contains(key)) throw InvalidInput("unknown config key '" + key + "'");
    }
    try {
        PipelineConfig& p = base.pipeline;
        if (j.contains("metric")) p.metric = metric_from_string(j["metric"].get<std::string>());
        if (j.contains("n_neighbors")) p.n_neighbors = j["n_neighbors"].get<Eigen::Index>();

        const std::string est = j.contains("estimator") ? j["estimator"].get<std::string>() : estimator_id(p.estimator);
        if (est == "glasso") {
            GlassoEstimator g = std::holds_alternative<GlassoEstimator>(p.estimator) ? std::get<GlassoEstimator>(p.estimator)
                                                                                      : GlassoEstimator{};
            if (j.contains("lambda_g")) g.lambda = j["lambda_g"].get<double>();
            p.estimator = g;
        } else if (est == "shrunk") {
            ShrunkEstimator s = std::holds_alternative<ShrunkEstimator>(p.estimator) ? std::get<ShrunkEstimator>(p.estimator)
                                                                                      : ShrunkEstimator{};
            if (j.contains("alpha_s")) s.alpha = j["alpha_s"].get<double>();
            p.estimator = s;
        } else {
            throw InvalidInput("unknown estimator '" + est + "'");
        }

        if (j.contains("n_bins")) p.binning.n_bins = j["n_bins"].get<int>();
        if (j.contains("max_dist_fraction")) p.binning.max_dist_fraction = j["max_dist_fraction"].get<double>();
        if (j.contains("family")) p.family = family_from_string(j["family"].get<std::string>());
        if (j.contains("beta")) p.penalty.beta = j["beta"].get<double>();
        if (j.contains("delta")) p.penalty.delta = j["delta"].get<double>();
        if (j.contains("range_conditioned")) p.penalty.range_conditioned = j["range_conditioned"].get<bool>();
        if (j.contains("eps")) {
            if (j["eps"].is_null()) p.eps.reset();
            else p.eps = j["eps"].get<double>();
        }
        if (j.contains("eps_percentile")) p.eps_percentile = j["eps_percentile"].get<double>();
        if (j.contains("min_samples")) p.min_samples = j["min_samples"].get<int>();
        if (j.contains("seed")) p.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("cache")) {
            if (j["cache"].is_null()) base.cache.reset();
            else base.cache = j["cache"].get<std::string>();
        }
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("config: ") + e.what());
    }
    validate(base.pipeline);
    return base;
}

nlohmann::json to_json(const RunConfig& config) {
    const PipelineConfig& p = config.pipeline;
    nlohmann::json j = {{"metric", to_string(p.metric)},
                        {"n_neighbors", p.n_neighbors},
                        {"estimator", estimator_id(p.estimator)},
                        {"n_bins", p.binning.n_bins},
                        {"max_dist_fraction", p.binning.max_dist_fraction},
                        {"family", to_string(p.family)},
                        {"beta", p.penalty.beta},
                        {"delta", p.penalty.delta},
                        {"range_conditioned", p.penalty.range_conditioned},
                        {"eps_percentile", p.eps_percentile},
                        {"min_samples", p.min_samples},
                        {"seed", p.seed}};
    if (std::holds_alternative<GlassoEstimator>(p.estimator)) j["lambda_g"] = std::get<GlassoEstimator>(p.estimator).lambda;
    else j["alpha_s"] = std::get<ShrunkEstimator>(p.estimator).alpha;
    j["eps"] = p.eps ? nlohmann::json(*p.eps) : nlohmann::json(nullptr);
    j["cache"] = config.cache ? nlohmann::json(config.cache->string()) : nlohmann::json(nullptr);
    return j;
}

RunConfig load_run_config(const std::filesystem::path& path, RunConfig base) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path.string() + ": " + e.what(), 0);
    }
    return config_from_json(j, std::move(base));
}

}  // namespace mcgta::io
