#include "mcgta/gmrf_estimation.hpp"

#include <cmath>
#include <sstream>

#include "mcgta/logging.hpp"
#include "mcgta/metric_space.hpp"

namespace mcgta {

std::string estimator_id(const EstimatorKind& est) {
    return std::holds_alternative<GlassoEstimator>(est) ? "glasso" : "shrunk";
}

double estimator_regularization(const EstimatorKind& est) {
    if (const auto* g = std::get_if<GlassoEstimator>(&est)) return g->lambda;
    return std::get<ShrunkEstimator>(est).alpha;
}

void validate(const EstimatorKind& est) {
    if (const auto* g = std::get_if<GlassoEstimator>(&est)) {
        if (!(g->lambda >= 0.0) || !std::isfinite(g->lambda)) throw InvalidInput("glasso lambda must be >= 0");
    } else {
        const double a = std::get<ShrunkEstimator>(est).alpha;
        if (!(a >= 0.0 && a <= 1.0)) throw InvalidInput("shrinkage alpha must be in [0, 1]");
    }
}

namespace {

double soft_threshold(double x, double t) {
    if (x > t) return x - t;
    if (x < -t) return x + t;
    return 0.0;
}

double duality_gap(const SymMatrix& s, const SymMatrix& precision, double lambda) {
    const double d = static_cast<double>(s.rows());
    const double off_l1 = precision.cwiseAbs().sum() - precision.diagonal().cwiseAbs().sum();
    return (s.cwiseProduct(precision)).sum() - d + lambda * off_l1;
}

// Coordinate descent for  min ½βᵀWβ − sᵀβ + λ‖β‖₁, warm-started from beta.
void lasso_cd(const Eigen::MatrixXd& w, const Eigen::VectorXd& s, double lambda, Eigen::VectorXd& beta,
              const GlassoOptions& opts) {
    const Eigen::Index m = s.size();
    const double scale = std::max(1e-300, s.cwiseAbs().maxCoeff() + lambda);
    for (int it = 0; it < opts.lasso_max_iter; ++it) {
        double max_step = 0.0;
        for (Eigen::Index k = 0; k < m; ++k) {
            const double r = s[k] - w.row(k).dot(beta) + w(k, k) * beta[k];
            const double next = soft_threshold(r, lambda) / w(k, k);
            max_step = std::max(max_step, std::abs(next - beta[k]) * w(k, k));
            beta[k] = next;
        }
        if (max_step <= opts.lasso_tol * scale) return;
    }
}

}  // namespace

std::pair<SymMatrix, SymMatrix> graphical_lasso_with_precision(const SymMatrix& emp_cov, double lambda,
                                                               const GlassoOptions& opts) {
    detail::require_square_finite(emp_cov, "graphical_lasso");
    if (!(lambda >= 0.0)) throw InvalidInput("graphical_lasso: lambda must be >= 0");
    const Eigen::Index d = emp_cov.rows();
    const SymMatrix s = symmetrize(emp_cov);

    const double diag_scale = std::max(1.0, s.diagonal().cwiseAbs().maxCoeff());
    if (s.diagonal().minCoeff() <= 1e-14 * diag_scale) {
        throw ConvergenceFailure("graphical_lasso: zero variance on the diagonal", s);
    }
    if (d == 1) return {s, s.cwiseInverse()};

    SymMatrix w = s;
    Eigen::LDLT<SymMatrix> ldlt(w);
    SymMatrix precision = ldlt.info() == Eigen::Success && ldlt.isPositive()
                              ? SymMatrix(ldlt.solve(SymMatrix::Identity(d, d)))
                              : SymMatrix(s.diagonal().cwiseInverse().asDiagonal());
    if (!precision.allFinite()) precision = s.diagonal().cwiseInverse().asDiagonal();

    std::vector<Eigen::Index> others(static_cast<std::size_t>(d - 1));
    Eigen::MatrixXd w11(d - 1, d - 1);
    Eigen::VectorXd s12(d - 1), beta(d - 1);

    for (int sweep = 0; sweep < opts.max_iter; ++sweep) {
        for (Eigen::Index j = 0; j < d; ++j) {
            for (Eigen::Index k = 0, t = 0; k < d; ++k) {
                if (k != j) others[static_cast<std::size_t>(t++)] = k;
            }
            for (Eigen::Index a = 0; a < d - 1; ++a) {
                s12[a] = s(others[a], j);
                beta[a] = -precision(others[a], j) / precision(j, j);
                for (Eigen::Index b = 0; b < d - 1; ++b) w11(a, b) = w(others[a], others[b]);
            }
            lasso_cd(w11, s12, lambda, beta, opts);
            const Eigen::VectorXd w12 = w11 * beta;
            for (Eigen::Index a = 0; a < d - 1; ++a) {
                w(others[a], j) = w12[a];
                w(j, others[a]) = w12[a];
            }
            const double schur = w(j, j) - w12.dot(beta);
            if (!(schur > 0.0) || !std::isfinite(schur)) {
                throw ConvergenceFailure("graphical_lasso: iterate lost positive definiteness", w);
            }
            const double pjj = 1.0 / schur;
            precision(j, j) = pjj;
            for (Eigen::Index a = 0; a < d - 1; ++a) {
                precision(others[a], j) = -pjj * beta[a];
                precision(j, others[a]) = -pjj * beta[a];
            }
        }
        if (!w.allFinite() || !precision.allFinite()) {
            throw ConvergenceFailure("graphical_lasso: non-finite iterate", w);
        }
        if (std::abs(duality_gap(s, precision, lambda)) < opts.tol) return {w, precision};
    }
    std::ostringstream msg;
    msg << "graphical_lasso: duality gap above " << opts.tol << " after " << opts.max_iter << " sweeps";
    throw ConvergenceFailure(msg.str(), w);
}

SymMatrix graphical_lasso(const SymMatrix& emp_cov, double lambda, const GlassoOptions& opts) {
    return graphical_lasso_with_precision(emp_cov, lambda, opts).first;
}

SymMatrix estimate_covariance(const SymMatrix& emp_cov, const EstimatorKind& est) {
    if (const auto* g = std::get_if<GlassoEstimator>(&est)) return graphical_lasso(emp_cov, g->lambda);
    return shrunk_cov(emp_cov, std::get<ShrunkEstimator>(est).alpha);
}

std::vector<FittedGaussian> fit_all_models(const Dataset& dataset, Eigen::Index n_neighbors,
                                           const EstimatorKind& estimator, MetricKind kind, FitStats* stats) {
    validate(estimator);
    const auto n = static_cast<Eigen::Index>(dataset.size());
    if (n_neighbors < 1 || n_neighbors >= n) {
        throw InvalidInput("fit_all_models: n_neighbors must satisfy 1 <= n_neighbors < N");
    }
    const Eigen::Index d = dataset.front().features.size();
    for (const auto& obs : dataset) {
        if (obs.features.size() != d) throw InvalidInput("fit_all_models: inconsistent feature dimension");
        if (!obs.features.allFinite()) throw InvalidInput("fit_all_models: non-finite feature");
    }
    if (n_neighbors < d) {
        warn("n_neighbors (" + std::to_string(n_neighbors) + ") is below the feature dimension (" +
             std::to_string(d) + "); covariance estimates will be rank-deficient");
    }
    const std::vector<Position> positions = positions_of(dataset);
    check_positions(positions, kind);

    FitStats local;
    std::vector<FittedGaussian> models;
    models.reserve(dataset.size());
    Eigen::MatrixXd samples(n_neighbors + 1, d);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto neighbors = knn(i, positions, n_neighbors, kind);
        samples.row(0) = dataset[i].features.transpose();
        for (Eigen::Index r = 0; r < n_neighbors; ++r) samples.row(r + 1) = dataset[neighbors[r]].features.transpose();

        auto [mean, emp] = empirical_cov(samples);
        SymMatrix cov;
        try {
            cov = estimate_covariance(emp, estimator);
        } catch (const ConvergenceFailure& e) {
            ++local.fallbacks;
            warn("observation " + std::to_string(i) + ": " + e.what() + "; falling back to shrunk covariance");
            cov = shrunk_cov(emp, kFallbackShrinkage);
        }
        models.push_back({std::move(mean), make_spd(cov, kRepairFloor)});
        ++local.fits;
    }
    if (stats) {
        ++stats->passes;
        stats->fits += local.fits;
        stats->fallbacks += local.fallbacks;
    }
    return models;
}

}  // namespace mcgta
