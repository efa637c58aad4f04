#include "mcgta/variogram.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "mcgta/metric_space.hpp"
#include "mcgta/nelder_mead.hpp"

namespace mcgta {

std::string to_string(VariogramFamily family) {
    return family == VariogramFamily::spherical ? "spherical" : "exponential";
}

VariogramFamily family_from_string(const std::string& name) {
    if (name == "spherical") return VariogramFamily::spherical;
    if (name == "exponential") return VariogramFamily::exponential;
    throw InvalidInput("unknown variogram family '" + name + "'");
}

Eigen::Index EmpiricalVariogram::nonempty_bins() const {
    return static_cast<Eigen::Index>(std::count_if(counts.begin(), counts.end(), [](auto c) { return c > 0; }));
}

EmpiricalVariogram build_empirical(const ModelDistanceMatrix& dm, std::span<const Position> positions,
                                   MetricKind kind, const BinningOptions& opts) {
    const Eigen::Index n = dm.n();
    if (n != static_cast<Eigen::Index>(positions.size())) {
        throw InvalidInput("build_empirical: distance matrix and positions disagree on N");
    }
    if (n < 2) throw InvalidInput("build_empirical: need at least 2 observations");
    if (opts.n_bins < 1) throw InvalidInput("build_empirical: n_bins must be positive");
    if (!(opts.max_dist_fraction > 0.0 && opts.max_dist_fraction <= 1.0)) {
        throw InvalidInput("build_empirical: max_dist_fraction must be in (0, 1]");
    }
    check_positions(positions, kind);

    const double cutoff = opts.max_dist_fraction * max_pairwise_distance(positions, kind);
    if (!(cutoff > 0.0)) throw DegenerateBinning("build_empirical: every pair is at distance zero");
    const double width = cutoff / opts.n_bins;

    std::vector<double> sums(static_cast<std::size_t>(opts.n_bins), 0.0);
    std::vector<std::int64_t> counts(static_cast<std::size_t>(opts.n_bins), 0);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double h = distance(positions[i], positions[j], kind);
            if (h > cutoff) continue;
            const auto k = std::clamp(static_cast<long>(std::ceil(h / width)) - 1, 0L, long(opts.n_bins) - 1);
            sums[static_cast<std::size_t>(k)] += dm(i, j);
            ++counts[static_cast<std::size_t>(k)];
        }
    }

    EmpiricalVariogram emp;
    emp.bin_half_width = width / 2.0;
    emp.bin_centers.resize(opts.n_bins);
    emp.semivariances.setZero(opts.n_bins);
    for (int k = 0; k < opts.n_bins; ++k) {
        emp.bin_centers[k] = (k + 0.5) * width;
        if (counts[static_cast<std::size_t>(k)] > 0) {
            emp.semivariances[k] = sums[static_cast<std::size_t>(k)] / (2.0 * double(counts[static_cast<std::size_t>(k)]));
        }
    }
    emp.counts = std::move(counts);
    if (opts.n_bins > 1 && emp.nonempty_bins() == 1) {
        throw DegenerateBinning("build_empirical: all pairs fall in a single bin");
    }
    return emp;
}

double eval_theoretical(const TheoreticalVariogram& tv, double h) {
    if (!(h >= 0.0)) throw InvalidInput("eval_theoretical: distance must be non-negative");
    const double partial = tv.sill - tv.nugget;
    switch (tv.family) {
        case VariogramFamily::spherical: {
            if (h >= tv.range) return tv.sill;
            const double r = h / tv.range;
            return tv.nugget + partial * (1.5 * r - 0.5 * r * r * r);
        }
        case VariogramFamily::exponential:
            return tv.nugget + partial * (1.0 - std::exp(-3.0 * h / tv.range));
    }
    return tv.sill;
}

namespace {

// Search coordinates: (ν / s, (σ − ν) / s, ρ / H). Every point is projected
// onto the feasible box before evaluation; the distance moved is added as a
// quadratic penalty so the simplex stays near the box.
struct FitProblem {
    std::vector<double> h, y, w;
    double y_scale = 1.0;
    double h_scale = 1.0;
    double rho_lo = 1e-6;
    double rho_hi = 2.0;
    VariogramFamily family = VariogramFamily::spherical;

    Eigen::Vector3d project(const Eigen::VectorXd& x) const {
        return {std::max(0.0, x[0]), std::max(0.0, x[1]), std::clamp(x[2], rho_lo, rho_hi)};
    }

    TheoreticalVariogram to_params(const Eigen::Vector3d& p) const {
        return {p[0] * y_scale, (p[0] + p[1]) * y_scale, p[2] * h_scale, family};
    }

    double operator()(const Eigen::VectorXd& x) const {
        const Eigen::Vector3d p = project(x);
        const double partial = p[1];
        double loss = 0.0;
        for (std::size_t k = 0; k < h.size(); ++k) {
            double g;
            if (family == VariogramFamily::spherical) {
                const double r = h[k] / p[2];
                g = r >= 1.0 ? p[0] + partial : p[0] + partial * (1.5 * r - 0.5 * r * r * r);
            } else {
                g = p[0] + partial * (1.0 - std::exp(-3.0 * h[k] / p[2]));
            }
            const double e = g - y[k];
            loss += w[k] * e * e;
        }
        return loss + (x - Eigen::VectorXd(p)).squaredNorm();
    }
};

}  // namespace

TheoreticalVariogram fit_theoretical(const EmpiricalVariogram& emp, VariogramFamily family,
                                     const VariogramFitOptions& opts) {
    if (emp.nonempty_bins() < 3) throw InsufficientData("fit_theoretical: need at least 3 non-empty bins");

    FitProblem prob;
    prob.family = family;
    double total = 0.0;
    for (Eigen::Index k = 0; k < emp.size(); ++k) {
        if (emp.empty_bin(k)) continue;
        prob.h.push_back(emp.bin_centers[k]);
        prob.y.push_back(emp.semivariances[k]);
        prob.w.push_back(double(emp.counts[static_cast<std::size_t>(k)]));
        total += prob.w.back();
    }
    for (double& w : prob.w) w /= total;
    const double y_max = *std::max_element(prob.y.begin(), prob.y.end());
    prob.y_scale = y_max > 0.0 ? y_max : 1.0;
    for (double& y : prob.y) y /= prob.y_scale;
    prob.h_scale = *std::max_element(prob.h.begin(), prob.h.end());
    for (double& h : prob.h) h /= prob.h_scale;
    prob.rho_lo = 1e-6;
    prob.rho_hi = 2.0;

    const double y_first = prob.y.front();
    std::vector<Eigen::VectorXd> starts;
    starts.push_back(Eigen::Vector3d(y_first, std::max(0.0, 1.0 - y_first), 0.5));
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    while (static_cast<int>(starts.size()) < std::max(1, opts.starts)) {
        const double nug = 0.8 * unit(rng) * y_first;
        const double part = 0.1 + 1.1 * unit(rng);
        const double rho = 0.02 + 1.5 * unit(rng);
        starts.push_back(Eigen::Vector3d(nug, part, rho));
    }

    NelderMeadOptions nm;
    nm.ftol = opts.tolerance;
    Eigen::VectorXd best_x;
    double best_f = std::numeric_limits<double>::infinity();
    for (const auto& s : starts) {
        // Restart from the previous optimum until the value stops moving.
        NelderMeadResult r = nelder_mead(prob, s, nm);
        for (int restart = 0; restart < 20; ++restart) {
            nm.initial_step = 0.05;
            NelderMeadResult again = nelder_mead(prob, r.x, nm);
            const bool stalled = r.value - again.value <= opts.tolerance * std::abs(r.value) + 1e-300;
            if (again.value < r.value) r = again;
            if (stalled) break;
        }
        nm.initial_step = 0.1;
        if (r.value < best_f) {
            best_f = r.value;
            best_x = r.x;
        }
    }
    return prob.to_params(prob.project(best_x));
}

}  // namespace mcgta
