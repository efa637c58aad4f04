#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

namespace mcgta {

struct NelderMeadOptions {
    double ftol = 1e-8;   // relative spread of simplex values
    double xtol = 1e-10;  // simplex diameter
    int max_iter = 4000;
    double initial_step = 0.1;
};

struct NelderMeadResult {
    Eigen::VectorXd x;
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Unconstrained Nelder–Mead (standard coefficients 1, 2, ½, ½). Bounds are
/// the caller's business, usually by projecting inside the objective.
template <typename Objective>
NelderMeadResult nelder_mead(Objective&& f, const Eigen::VectorXd& start, const NelderMeadOptions& opts = {}) {
    const Eigen::Index n = start.size();
    std::vector<Eigen::VectorXd> simplex(static_cast<std::size_t>(n + 1), start);
    std::vector<double> values(static_cast<std::size_t>(n + 1));
    for (Eigen::Index i = 0; i < n; ++i) {
        const double step = start[i] != 0.0 ? opts.initial_step * std::abs(start[i]) : opts.initial_step;
        simplex[static_cast<std::size_t>(i + 1)][i] += step;
    }
    for (std::size_t i = 0; i < simplex.size(); ++i) values[i] = f(simplex[i]);

    std::vector<std::size_t> order(simplex.size());
    NelderMeadResult res;
    for (res.iterations = 0; res.iterations < opts.max_iter; ++res.iterations) {
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
        const std::size_t best = order.front(), worst = order.back(), second = order[order.size() - 2];

        double diameter = 0.0;
        for (const auto& v : simplex) diameter = std::max(diameter, (v - simplex[best]).cwiseAbs().maxCoeff());
        const double spread = values[worst] - values[best];
        if (spread <= opts.ftol * std::abs(values[best]) + 1e-300 || diameter <= opts.xtol) {
            res.converged = true;
            break;
        }

        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
        for (std::size_t i = 0; i < simplex.size(); ++i) {
            if (i != worst) centroid += simplex[i];
        }
        centroid /= double(n);

        const Eigen::VectorXd reflected = centroid + (centroid - simplex[worst]);
        const double fr = f(reflected);
        if (fr < values[best]) {
            const Eigen::VectorXd expanded = centroid + 2.0 * (centroid - simplex[worst]);
            const double fe = f(expanded);
            if (fe < fr) {
                simplex[worst] = expanded;
                values[worst] = fe;
            } else {
                simplex[worst] = reflected;
                values[worst] = fr;
            }
            continue;
        }
        if (fr < values[second]) {
            simplex[worst] = reflected;
            values[worst] = fr;
            continue;
        }
        const bool outside = fr < values[worst];
        const Eigen::VectorXd contracted =
            outside ? Eigen::VectorXd(centroid + 0.5 * (reflected - centroid))
                    : Eigen::VectorXd(centroid + 0.5 * (simplex[worst] - centroid));
        const double fc = f(contracted);
        if (fc < (outside ? fr : values[worst])) {
            simplex[worst] = contracted;
            values[worst] = fc;
            continue;
        }
        for (std::size_t i = 0; i < simplex.size(); ++i) {
            if (i == best) continue;
            simplex[i] = simplex[best] + 0.5 * (simplex[i] - simplex[best]);
            values[i] = f(simplex[i]);
        }
    }
    const auto it = std::min_element(values.begin(), values.end());
    res.x = simplex[static_cast<std::size_t>(it - values.begin())];
    res.value = *it;
    return res;
}

}  // namespace mcgta
