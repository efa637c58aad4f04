#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "mcgta/errors.hpp"
#include "mcgta/spd_math.hpp"

namespace mcgta {

/// Metric-space coordinates. One entry for temporal data, two for spatial;
/// geodesic positions are (longitude°, latitude°).
using Position = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 2, 1>;

enum class MetricKind { absolute_index, euclidean, geodesic };

struct Observation {
    Eigen::VectorXd features;
    Position position;
};

using Dataset = std::vector<Observation>;

/// Per-observation Gaussian model (μ, Σ) with Σ symmetric positive definite.
template <typename Scalar>
struct Gaussian {
    VectorX<Scalar> mean;
    MatrixX<Scalar> covariance;

    Eigen::Index dim() const { return mean.size(); }
};

using FittedGaussian = Gaussian<double>;

/// Symmetric n×n matrix of non-negative entries with zero diagonal. The tag
/// keeps model dissimilarities and penalized distances from being mixed up.
template <typename Tag>
class DistanceMatrix {
public:
    DistanceMatrix() = default;
    explicit DistanceMatrix(Eigen::Index n) : entries_(Eigen::MatrixXd::Zero(n, n)) {}
    explicit DistanceMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
        if (entries_.rows() != entries_.cols()) throw InvalidInput("distance matrix must be square");
    }

    Eigen::Index n() const { return entries_.rows(); }
    double operator()(Eigen::Index i, Eigen::Index j) const { return entries_(i, j); }

    /// Writes both (i, j) and (j, i).
    void set(Eigen::Index i, Eigen::Index j, double v) {
        entries_(i, j) = v;
        entries_(j, i) = v;
    }

    const Eigen::MatrixXd& matrix() const { return entries_; }

    friend bool operator==(const DistanceMatrix& a, const DistanceMatrix& b) {
        return a.entries_.rows() == b.entries_.rows() && a.entries_.cols() == b.entries_.cols() &&
               (a.entries_.array() == b.entries_.array()).all();
    }

private:
    Eigen::MatrixXd entries_;
};

using ModelDistanceMatrix = DistanceMatrix<struct ModelDistanceTag>;
using WeightedDistanceMatrix = DistanceMatrix<struct WeightedDistanceTag>;

inline constexpr int kNoiseLabel = -1;

/// Per-observation labels; noise is kNoiseLabel, clusters are 0..K-1.
struct ClusterAssignment {
    std::vector<int> labels;

    int cluster_count() const {
        int k = 0;
        for (int l : labels) k = std::max(k, l + 1);
        return k;
    }
    std::size_t noise_count() const {
        std::size_t c = 0;
        for (int l : labels) c += (l == kNoiseLabel);
        return c;
    }
};

}  // namespace mcgta
