#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mcgta/types.hpp"

namespace mcgta {

enum class VariogramFamily { spherical, exponential };

std::string to_string(VariogramFamily family);
VariogramFamily family_from_string(const std::string& name);

/// Binned semivariance of model dissimilarity against metric distance:
/// γ̂(h ± ε) = (1 / 2|N(h ± ε)|) Σ_{(i,j) ∈ N(h ± ε)} W₂²(i, j).
struct EmpiricalVariogram {
    Eigen::VectorXd bin_centers;
    double bin_half_width = 0.0;
    Eigen::VectorXd semivariances;  // 0 for empty bins
    std::vector<std::int64_t> counts;

    Eigen::Index size() const { return bin_centers.size(); }
    bool empty_bin(Eigen::Index k) const { return counts[static_cast<std::size_t>(k)] == 0; }
    Eigen::Index nonempty_bins() const;
};

/// Nugget ν, sill σ and range ρ of a fitted curve. For the exponential
/// family ρ is the effective range (95% of the partial sill).
struct TheoreticalVariogram {
    double nugget = 0.0;
    double sill = 0.0;
    double range = 1.0;
    VariogramFamily family = VariogramFamily::spherical;
};

struct BinningOptions {
    int n_bins = 50;
    double max_dist_fraction = 0.5;
};

/// Pairs (i < j) are binned on [0, max_dist_fraction · max d_c] with
/// right-closed bins ((k-1)w, kw]; distance 0 lands in the first bin and
/// pairs beyond the cutoff are dropped.
EmpiricalVariogram build_empirical(const ModelDistanceMatrix& dm, std::span<const Position> positions,
                                   MetricKind kind, const BinningOptions& opts = {});

struct VariogramFitOptions {
    int starts = 16;
    std::uint64_t seed = 0x5eed'1234ULL;
    double tolerance = 1e-8;
};

/// Count-weighted least squares fit of ν, σ, ρ with 0 ≤ ν ≤ σ and
/// 0 < ρ ≤ 2·(largest non-empty bin center). Multi-start Nelder–Mead.
TheoreticalVariogram fit_theoretical(const EmpiricalVariogram& emp, VariogramFamily family,
                                     const VariogramFitOptions& opts = {});

double eval_theoretical(const TheoreticalVariogram& tv, double h);

}  // namespace mcgta
