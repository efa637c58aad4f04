#pragma once

#include <span>
#include <vector>

#include "mcgta/spd_math.hpp"
#include "mcgta/types.hpp"

namespace mcgta {

namespace detail {

// Tr((R Σ_b R)^{1/2}) with R = Σ_a^{1/2}, via the eigenvalues of the inner product.
template <typename DerivedR, typename DerivedB>
typename DerivedR::Scalar trace_of_cross_root(const Eigen::MatrixBase<DerivedR>& root_a,
                                              const Eigen::MatrixBase<DerivedB>& cov_b) {
    using Scalar = typename DerivedR::Scalar;
    const MatrixX<Scalar> inner = symmetrize(root_a * cov_b * root_a);
    return sym_eigenvalues(inner).cwiseMax(Scalar(0)).cwiseSqrt().sum();
}

template <typename Scalar>
Scalar w2_from_parts(const Gaussian<Scalar>& a, const Gaussian<Scalar>& b, Scalar cross_trace) {
    const Scalar mean_term = (a.mean - b.mean).squaredNorm();
    const Scalar cov_term = a.covariance.trace() + b.covariance.trace() - Scalar(2) * cross_trace;
    return std::max(Scalar(0), mean_term + cov_term);
}

}  // namespace detail

/// Squared 2-Wasserstein distance between two Gaussians:
///   ‖μ_a − μ_b‖² + Tr(Σ_a + Σ_b − 2 (Σ_a^{1/2} Σ_b Σ_a^{1/2})^{1/2}).
/// Round-off negatives are clamped to zero.
template <typename Scalar>
Scalar w2_squared(const Gaussian<Scalar>& a, const Gaussian<Scalar>& b) {
    if (a.dim() != b.dim() || a.covariance.rows() != a.dim() || b.covariance.rows() != b.dim()) {
        throw InvalidInput("w2_squared: dimension mismatch");
    }
    const MatrixX<Scalar> root_a = spd_sqrt(a.covariance);
    return detail::w2_from_parts(a, b, detail::trace_of_cross_root(root_a, b.covariance));
}

/// d_m(i, j) = W₂²(models[i], models[j]); each unordered pair evaluated once.
ModelDistanceMatrix pairwise_w2(std::span<const FittedGaussian> models);

}  // namespace mcgta
