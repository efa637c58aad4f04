#include "mcgta/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace mcgta {

namespace {

void check_matrix(const WeightedDistanceMatrix& mw) {
    const Eigen::MatrixXd& m = mw.matrix();
    if (!m.allFinite()) throw InvalidInput("dbscan: distance matrix has non-finite entries");
    if (m.size() > 0 && m.minCoeff() < 0.0) throw InvalidInput("dbscan: distance matrix has negative entries");
    const double tol = 1e-12 * std::max(1.0, m.size() > 0 ? m.maxCoeff() : 0.0);
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > tol) throw InvalidInput("dbscan: distance matrix is not symmetric");
}

}  // namespace

ClusterAssignment dbscan_precomputed(const WeightedDistanceMatrix& mw, const DbscanParams& params) {
    if (!(params.eps > 0.0)) throw InvalidInput("dbscan: eps must be positive");
    if (params.min_samples < 1) throw InvalidInput("dbscan: min_samples must be >= 1");
    const Eigen::Index n = mw.n();
    ClusterAssignment out;
    if (n == 0) return out;
    check_matrix(mw);

    const Eigen::MatrixXd& m = mw.matrix();
    std::vector<std::vector<Eigen::Index>> neighbors(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        auto& nb = neighbors[static_cast<std::size_t>(i)];
        for (Eigen::Index j = 0; j < n; ++j) {
            if (m(j, i) <= params.eps) nb.push_back(j);
        }
    }
    auto is_core = [&](Eigen::Index i) {
        return static_cast<long>(neighbors[static_cast<std::size_t>(i)].size()) >= params.min_samples;
    };

    constexpr int kUnvisited = -2;
    out.labels.assign(static_cast<std::size_t>(n), kUnvisited);
    int next_id = 0;
    std::deque<Eigen::Index> queue;
    for (Eigen::Index seed = 0; seed < n; ++seed) {
        if (out.labels[static_cast<std::size_t>(seed)] != kUnvisited || !is_core(seed)) continue;
        const int id = next_id++;
        out.labels[static_cast<std::size_t>(seed)] = id;
        queue.assign(1, seed);
        while (!queue.empty()) {
            const Eigen::Index p = queue.front();
            queue.pop_front();
            if (!is_core(p)) continue;
            for (Eigen::Index q : neighbors[static_cast<std::size_t>(p)]) {
                if (out.labels[static_cast<std::size_t>(q)] != kUnvisited) continue;
                out.labels[static_cast<std::size_t>(q)] = id;
                queue.push_back(q);
            }
        }
    }
    for (int& l : out.labels) {
        if (l == kUnvisited) l = kNoiseLabel;
    }
    return out;
}

double eps_from_percentile(const WeightedDistanceMatrix& mw, double q) {
    if (!(q >= 0.0 && q <= 100.0)) throw InvalidInput("eps percentile must be in [0, 100]");
    const Eigen::Index n = mw.n();
    if (n < 2) throw InvalidInput("eps percentile needs at least 2 observations");
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) values.push_back(mw(i, j));
    }
    const double pos = q / 100.0 * double(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    std::nth_element(values.begin(), values.begin() + static_cast<long>(lo), values.end());
    const double lo_val = values[lo];
    if (lo + 1 >= values.size()) return lo_val;
    const double hi_val = *std::min_element(values.begin() + static_cast<long>(lo) + 1, values.end());
    return lo_val + (pos - double(lo)) * (hi_val - lo_val);
}

}  // namespace mcgta
