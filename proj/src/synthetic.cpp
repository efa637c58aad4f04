#include "mcgta/synthetic.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "mcgta/wasserstein.hpp"

namespace mcgta {

void validate(const SynthConfig& c) {
    if (c.clusters < 2) throw InvalidInput("synthetic: K must be >= 2");
    if (c.dim < 1) throw InvalidInput("synthetic: D must be >= 1");
    if (!(c.noise >= 0.0) || !std::isfinite(c.noise)) throw InvalidInput("synthetic: noise scale must be >= 0");
    if (c.batch < 1) throw InvalidInput("synthetic: batch must be >= 1");
    if (c.min_segments < 1 || c.max_segments < c.min_segments) throw InvalidInput("synthetic: bad segment range");
    if (c.min_segment_length < 1 || c.max_segment_length < c.min_segment_length) {
        throw InvalidInput("synthetic: bad segment length range");
    }
    if (c.min_cluster_size < 1 || c.max_cluster_size < c.min_cluster_size) {
        throw InvalidInput("synthetic: bad cluster size range");
    }
    if (!(c.extent > 0.0) || !(c.min_spread > 0.0) || c.max_spread < c.min_spread) {
        throw InvalidInput("synthetic: bad spatial ranges");
    }
}

namespace {

using Rng = std::mt19937_64;

Eigen::MatrixXd standard_normal(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
        for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
    }
    return m;
}

int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

// Σ + E with E symmetric Gaussian of the given scale, each entry clipped to
// 10% of the largest |Σ| entry, then repaired to SPD.
SymMatrix perturb(const SymMatrix& sigma, double scale, Rng& rng) {
    const Eigen::Index d = sigma.rows();
    const SymMatrix raw = standard_normal(rng, d, d);
    if (scale == 0.0) return sigma;
    const double clip = 0.1 * sigma.cwiseAbs().maxCoeff();
    const SymMatrix noise = (scale * symmetrize(raw)).cwiseMax(-clip).cwiseMin(clip);
    return make_spd(symmetrize(sigma + noise), kRepairFloor);
}

Eigen::VectorXd sample_zero_mean(const SymMatrix& cov, Rng& rng) {
    Eigen::LLT<SymMatrix> llt(cov);
    if (llt.info() != Eigen::Success) throw GenerationFailure("synthetic: covariance not positive definite");
    return llt.matrixL() * standard_normal(rng, cov.rows(), 1);
}

}  // namespace

std::vector<SymMatrix> gen_ground_truth_covs(int clusters, int dim, std::uint64_t seed) {
    if (clusters < 2) throw InvalidInput("gen_ground_truth_covs: K must be >= 2");
    if (dim < 1) throw InvalidInput("gen_ground_truth_covs: D must be >= 1");
    Rng rng(seed);
    std::vector<SymMatrix> accepted;
    std::vector<FittedGaussian> as_models;
    for (int attempt = 0; attempt < kMaxCovarianceAttempts; ++attempt) {
        const Eigen::MatrixXd g = standard_normal(rng, dim, dim);
        SymMatrix sigma = symmetrize(g * g.transpose() / double(dim));
        sigma.diagonal().array() += 0.1;
        FittedGaussian candidate{Eigen::VectorXd::Zero(dim), sigma};
        bool separated = true;
        for (const auto& m : as_models) {
            if (!(w2_squared(candidate, m) > kMinClusterSeparation)) {
                separated = false;
                break;
            }
        }
        if (!separated) continue;
        accepted.push_back(sigma);
        as_models.push_back(std::move(candidate));
        if (static_cast<int>(accepted.size()) == clusters) return accepted;
    }
    throw GenerationFailure("gen_ground_truth_covs: could not separate " + std::to_string(clusters) +
                            " covariances within " + std::to_string(kMaxCovarianceAttempts) + " draws");
}

SynthDataset gen_temporal(const SynthConfig& config) {
    validate(config);
    SynthDataset out;
    out.ground_truth_covs = gen_ground_truth_covs(config.clusters, config.dim, config.seed);
    Rng rng(config.seed ^ 0x7e3f0a11ULL);

    const int segments = uniform_int(rng, config.min_segments, config.max_segments);
    std::vector<int> labels(static_cast<std::size_t>(segments));
    std::vector<int> lengths(static_cast<std::size_t>(segments));
    for (int& l : labels) l = uniform_int(rng, 0, config.clusters - 1);
    for (int& l : lengths) l = uniform_int(rng, config.min_segment_length, config.max_segment_length);

    double t = 0.0;
    for (int s = 0; s < segments; ++s) {
        const int label = labels[static_cast<std::size_t>(s)];
        const SymMatrix& sigma = out.ground_truth_covs[static_cast<std::size_t>(label)];
        for (int j = 1; j <= lengths[static_cast<std::size_t>(s)]; ++j) {
            const SymMatrix p = perturb(sigma, j * config.noise, rng);
            for (int b = 0; b < config.batch; ++b) {
                Position pos(1);
                pos[0] = t;
                t += 1.0;
                out.observations.push_back({sample_zero_mean(p, rng), pos});
                out.truth.push_back(label);
            }
        }
    }
    return out;
}

SynthDataset gen_spatial(const SynthConfig& config) {
    validate(config);
    SynthDataset out;
    out.ground_truth_covs = gen_ground_truth_covs(config.clusters, config.dim, config.seed);
    Rng rng(config.seed ^ 0x5ba71a1ULL);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    for (int k = 0; k < config.clusters; ++k) {
        const int size = uniform_int(rng, config.min_cluster_size, config.max_cluster_size);
        const Eigen::Vector2d center(config.extent * unit(rng), config.extent * unit(rng));
        const double angle = std::numbers::pi * unit(rng);
        Eigen::Matrix2d rot;
        rot << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
        const Eigen::Vector2d eig(config.min_spread + (config.max_spread - config.min_spread) * unit(rng),
                                  config.min_spread + (config.max_spread - config.min_spread) * unit(rng));
        const Eigen::Matrix2d spread = rot * eig.asDiagonal() * rot.transpose();
        const Eigen::Matrix2d chol = Eigen::LLT<Eigen::Matrix2d>(spread).matrixL();

        const SymMatrix& sigma = out.ground_truth_covs[static_cast<std::size_t>(k)];
        for (int j = 0; j < size; ++j) {
            const Eigen::Vector2d p = center + chol * standard_normal(rng, 2, 1);
            const double dist = (p - center).norm();
            const SymMatrix cov = perturb(sigma, dist * config.noise, rng);
            Position pos(2);
            pos << p[0], p[1];
            out.observations.push_back({sample_zero_mean(cov, rng), pos});
            out.truth.push_back(k);
        }
    }
    return out;
}

}  // namespace mcgta
