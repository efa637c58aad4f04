#pragma once

#include "mcgta/types.hpp"

namespace mcgta {

struct DbscanParams {
    double eps = 1.0;
    int min_samples = 5;
};

/// DBSCAN over a precomputed distance matrix. A point is core when at least
/// min_samples points (itself included) lie within eps (inclusive). Seeds are
/// taken in ascending index order and each expansion is breadth-first, so a
/// border point joins the first cluster that reaches it.
ClusterAssignment dbscan_precomputed(const WeightedDistanceMatrix& mw, const DbscanParams& params);

/// q-th percentile (q in [0, 100], linear interpolation) of the
/// off-diagonal entries. Used as the default eps.
double eps_from_percentile(const WeightedDistanceMatrix& mw, double q);

}  // namespace mcgta
