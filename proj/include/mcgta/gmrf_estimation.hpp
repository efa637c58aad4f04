#pragma once

#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "mcgta/spd_math.hpp"
#include "mcgta/types.hpp"

namespace mcgta {

/// Sparse inverse-covariance estimate with off-diagonal L1 weight `lambda`.
struct GlassoEstimator {
    double lambda = 0.01;
};

/// Convex blend of the empirical covariance with tr(S)/d · I.
struct ShrunkEstimator {
    double alpha = 0.1;
};

using EstimatorKind = std::variant<GlassoEstimator, ShrunkEstimator>;

/// "glasso" or "shrunk".
std::string estimator_id(const EstimatorKind& est);
/// λ_g or α_s, whichever applies.
double estimator_regularization(const EstimatorKind& est);
void validate(const EstimatorKind& est);

struct GlassoOptions {
    double tol = 1e-4;  // duality gap
    int max_iter = 100;  // outer sweeps
    double lasso_tol = 1e-10;
    int lasso_max_iter = 1000;
};

/// Sample mean and 1/n-normalized covariance of the rows of `samples`.
template <typename Derived>
std::pair<VectorX<typename Derived::Scalar>, MatrixX<typename Derived::Scalar>> empirical_cov(
    const Eigen::MatrixBase<Derived>& samples) {
    using Scalar = typename Derived::Scalar;
    const auto n = samples.rows();
    if (n < 2) throw InsufficientSamples("empirical_cov: need at least 2 samples");
    if (!samples.allFinite()) throw InvalidInput("empirical_cov: non-finite sample");
    VectorX<Scalar> mean = samples.colwise().mean().transpose();
    const MatrixX<Scalar> centered = samples.rowwise() - mean.transpose();
    MatrixX<Scalar> cov = (centered.transpose() * centered) / Scalar(n);
    return {std::move(mean), symmetrize(cov)};
}

/// (1-α)·S + α·(tr(S)/d)·I
template <typename Derived>
MatrixX<typename Derived::Scalar> shrunk_cov(const Eigen::MatrixBase<Derived>& emp_cov,
                                             typename Derived::Scalar alpha) {
    using Scalar = typename Derived::Scalar;
    if (!(alpha >= Scalar(0) && alpha <= Scalar(1))) throw InvalidInput("shrunk_cov: alpha must be in [0, 1]");
    detail::require_square_finite(emp_cov, "shrunk_cov");
    const Eigen::Index d = emp_cov.rows();
    const Scalar mu = emp_cov.trace() / Scalar(d);
    MatrixX<Scalar> out = (Scalar(1) - alpha) * emp_cov;
    out.diagonal().array() += alpha * mu;
    return out;
}

/// Covariance Σ = Θ⁻¹ where Θ maximizes log det Θ − tr(SΘ) − λ Σ_{i≠j}|Θ_ij|.
/// Block coordinate descent over columns of Σ, each column a lasso solved by
/// coordinate descent. Throws ConvergenceFailure (with the last iterate) when
/// the duality gap does not reach `opts.tol` within `opts.max_iter` sweeps, or
/// when the iterate loses positive definiteness.
SymMatrix graphical_lasso(const SymMatrix& emp_cov, double lambda, const GlassoOptions& opts = {});

/// Same solve, returning the precision matrix Θ alongside the covariance.
std::pair<SymMatrix, SymMatrix> graphical_lasso_with_precision(const SymMatrix& emp_cov, double lambda,
                                                               const GlassoOptions& opts = {});

/// Applies the estimator to an empirical covariance. No SPD repair.
SymMatrix estimate_covariance(const SymMatrix& emp_cov, const EstimatorKind& est);

struct FitStats {
    std::size_t passes = 0;     // fit_all_models invocations
    std::size_t fits = 0;       // models estimated
    std::size_t fallbacks = 0;  // glasso failures replaced by shrunk(0.1)
};

inline constexpr double kFallbackShrinkage = 0.1;

/// One Gaussian per observation, estimated from the features of the
/// observation and its n_neighbors nearest metric-space neighbors.
/// Covariances are repaired with make_spd(·, kRepairFloor).
std::vector<FittedGaussian> fit_all_models(const Dataset& dataset, Eigen::Index n_neighbors,
                                           const EstimatorKind& estimator, MetricKind kind,
                                           FitStats* stats = nullptr);

}  // namespace mcgta
