#include "mcgta/wasserstein.hpp"

namespace mcgta {

ModelDistanceMatrix pairwise_w2(std::span<const FittedGaussian> models) {
    const auto n = static_cast<Eigen::Index>(models.size());
    if (n < 2) throw InvalidInput("pairwise_w2: need at least 2 models");
    const Eigen::Index d = models.front().dim();
    std::vector<Eigen::MatrixXd> roots;
    roots.reserve(models.size());
    for (const auto& m : models) {
        if (m.dim() != d || m.covariance.rows() != d || m.covariance.cols() != d) {
            throw InvalidInput("pairwise_w2: dimension mismatch");
        }
        roots.push_back(spd_sqrt(m.covariance));
    }

    ModelDistanceMatrix out(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double cross = detail::trace_of_cross_root(roots[i], models[j].covariance);
            out.set(i, j, detail::w2_from_parts(models[i], models[j], cross));
        }
    }
    return out;
}

}  // namespace mcgta
