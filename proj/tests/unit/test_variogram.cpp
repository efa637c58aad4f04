#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "generators.hpp"
#include "mcgta/errors.hpp"
#include "mcgta/metric_space.hpp"
#include "mcgta/variogram.hpp"

using namespace mcgta;

namespace {

std::vector<Position> line(std::initializer_list<double> xs) {
    std::vector<Position> out;
    for (double x : xs) out.push_back(Position::Constant(1, x));
    return out;
}

EmpiricalVariogram exact_bins(const TheoreticalVariogram& tv, int n, double h_max) {
    EmpiricalVariogram emp;
    emp.bin_half_width = h_max / n / 2;
    emp.bin_centers.resize(n);
    emp.semivariances.resize(n);
    emp.counts.assign(static_cast<std::size_t>(n), 10);
    for (int k = 0; k < n; ++k) {
        emp.bin_centers[k] = (k + 0.5) * h_max / n;
        emp.semivariances[k] = eval_theoretical(tv, emp.bin_centers[k]);
    }
    return emp;
}

}  // namespace

TEST_CASE("build_empirical with two observations and one bin") {
    ModelDistanceMatrix dm(2);
    dm.set(0, 1, 3.0);
    const auto emp = build_empirical(dm, line({0, 4}), MetricKind::absolute_index, {1, 1.0});
    REQUIRE(emp.size() == 1);
    CHECK(emp.semivariances[0] == 1.5);
    CHECK(emp.counts[0] == 1);
}

TEST_CASE("build_empirical hand partition of three collinear points") {
    const double a = 0.7, b = 1.9, c = 4.2;
    ModelDistanceMatrix dm(3);
    dm.set(0, 1, a);
    dm.set(1, 2, b);
    dm.set(0, 2, c);
    const auto emp = build_empirical(dm, line({0, 1, 2}), MetricKind::absolute_index, {2, 1.0});
    REQUIRE(emp.size() == 2);
    CHECK(emp.counts == std::vector<std::int64_t>{2, 1});
    CHECK(emp.semivariances[0] == doctest::Approx((a + b) / 4));
    CHECK(emp.semivariances[1] == doctest::Approx(c / 2));
    CHECK(emp.bin_centers[0] == doctest::Approx(0.5));
    CHECK(emp.bin_centers[1] == doctest::Approx(1.5));
    CHECK(emp.bin_half_width == doctest::Approx(0.5));
}

TEST_CASE("build_empirical with constant dissimilarity") {
    gen::Rng rng(51);
    const auto ps = gen::positions(rng, 40, 2);
    ModelDistanceMatrix dm(40);
    for (Eigen::Index i = 0; i < 40; ++i)
        for (Eigen::Index j = i + 1; j < 40; ++j) dm.set(i, j, 2.6);
    const auto emp = build_empirical(dm, ps, MetricKind::euclidean, {10, 0.5});
    for (Eigen::Index k = 0; k < emp.size(); ++k)
        if (!emp.empty_bin(k)) CHECK(emp.semivariances[k] == doctest::Approx(1.3));
}

TEST_CASE("build_empirical errors") {
    ModelDistanceMatrix dm(2);
    dm.set(0, 1, 1.0);
    CHECK_THROWS_AS(build_empirical(dm, line({3, 3}), MetricKind::absolute_index, {3, 1.0}), DegenerateBinning);
    CHECK_THROWS_AS(build_empirical(dm, line({0, 9}), MetricKind::absolute_index, {3, 1.0}), DegenerateBinning);
    CHECK_THROWS_AS(build_empirical(dm, line({0, 1, 2}), MetricKind::absolute_index, {3, 1.0}), InvalidInput);
    CHECK_THROWS_AS(build_empirical(dm, line({0, 1}), MetricKind::absolute_index, {0, 1.0}), InvalidInput);
    CHECK_THROWS_AS(build_empirical(dm, line({0, 1}), MetricKind::absolute_index, {3, 1.5}), InvalidInput);
}

TEST_CASE("bin counts cover every pair inside the cutoff exactly once") {
    gen::Rng rng(52);
    for (int trial = 0; trial < 20; ++trial) {
        const auto n = static_cast<Eigen::Index>(gen::integer(rng, 5, 80));
        const auto ps = gen::positions(rng, static_cast<std::size_t>(n), 2);
        const auto dm = gen::random_dm(rng, n);
        const BinningOptions opts{gen::integer(rng, 3, 30), gen::uniform(rng, 0.2, 1.0)};
        const double cutoff = opts.max_dist_fraction * max_pairwise_distance(ps, MetricKind::euclidean);
        std::int64_t inside = 0;
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = i + 1; j < n; ++j) inside += distance(ps[i], ps[j], MetricKind::euclidean) <= cutoff;
        EmpiricalVariogram emp;
        try {
            emp = build_empirical(dm, ps, MetricKind::euclidean, opts);
        } catch (const DegenerateBinning&) {
            continue;
        }
        std::int64_t total = 0;
        for (auto c : emp.counts) total += c;
        CHECK(total == inside);
    }
}

TEST_CASE("doubling every dissimilarity doubles every semivariance exactly") {
    gen::Rng rng(53);
    const auto ps = gen::positions(rng, 50, 2);
    const auto dm = gen::random_dm(rng, 50);
    const ModelDistanceMatrix doubled(Eigen::MatrixXd(2.0 * dm.matrix()));
    const auto a = build_empirical(dm, ps, MetricKind::euclidean);
    const auto b = build_empirical(doubled, ps, MetricKind::euclidean);
    CHECK((b.semivariances.array() == 2.0 * a.semivariances.array()).all());
}

TEST_CASE("eval_theoretical examples") {
    const TheoreticalVariogram sph{0.1, 1.0, 2.0, VariogramFamily::spherical};
    CHECK(eval_theoretical(sph, 1.0) == doctest::Approx(0.71875).epsilon(1e-15));
    CHECK(eval_theoretical(sph, 5.0) == 1.0);
    CHECK(eval_theoretical(sph, 2.0) == 1.0);
    CHECK(eval_theoretical(sph, 0.0) == 0.1);
    const TheoreticalVariogram ex{0.2, 1.0, 3.0, VariogramFamily::exponential};
    CHECK(eval_theoretical(ex, 0.0) == 0.2);
    CHECK(eval_theoretical(ex, 3.0) == doctest::Approx(0.2 + 0.8 * (1 - std::exp(-3.0))));
    CHECK_THROWS_AS(eval_theoretical(sph, -1.0), InvalidInput);
}

TEST_CASE("eval_theoretical is monotone non-decreasing") {
    gen::Rng rng(54);
    for (int trial = 0; trial < 100; ++trial) {
        const double nug = gen::uniform(rng, 0, 1);
        const TheoreticalVariogram tv{nug, nug + gen::uniform(rng, 0, 2), gen::uniform(rng, 0.1, 5),
                                      trial % 2 ? VariogramFamily::spherical : VariogramFamily::exponential};
        double prev = eval_theoretical(tv, 0.0);
        for (double h = 0.01; h < 10; h += 0.01) {
            const double v = eval_theoretical(tv, h);
            CHECK(prev <= v + 1e-12);
            prev = v;
        }
    }
}

TEST_CASE("family names round-trip") {
    CHECK(family_from_string("spherical") == VariogramFamily::spherical);
    CHECK(family_from_string(to_string(VariogramFamily::exponential)) == VariogramFamily::exponential);
    CHECK_THROWS_AS(family_from_string("gaussian"), InvalidInput);
}

TEST_CASE("fit_theoretical recovers exactly generated spherical bins") {
    const TheoreticalVariogram truth{0.1, 1.0, 2.0, VariogramFamily::spherical};
    const auto fit = fit_theoretical(exact_bins(truth, 20, 4.0), VariogramFamily::spherical);
    CHECK(fit.nugget == doctest::Approx(0.1).epsilon(1e-3).scale(1.0));
    CHECK(std::abs(fit.nugget - 0.1) < 1e-3);
    CHECK(std::abs(fit.sill - 1.0) < 1e-3);
    CHECK(std::abs(fit.range - 2.0) < 1e-3);
}

TEST_CASE("fit_theoretical round-trips random spherical and exponential parameters") {
    gen::Rng rng(55);
    for (int trial = 0; trial < 10; ++trial) {
        const double nug = gen::uniform(rng, 0, 1);
        const auto family = trial % 2 ? VariogramFamily::spherical : VariogramFamily::exponential;
        const TheoreticalVariogram truth{nug, nug + gen::uniform(rng, 0.2, 2), gen::uniform(rng, 0.5, 3), family};
        const auto fit = fit_theoretical(exact_bins(truth, 30, 4.0), family);
        CHECK(std::abs(fit.nugget - truth.nugget) < 1e-3);
        CHECK(std::abs(fit.sill - truth.sill) < 1e-3);
        CHECK(std::abs(fit.range - truth.range) < 1e-3);
    }
}

TEST_CASE("fit_theoretical on flat bins") {
    EmpiricalVariogram emp = exact_bins({0.0, 0.0, 1.0, VariogramFamily::spherical}, 10, 5.0);
    emp.semivariances.setConstant(0.8);
    const auto fit = fit_theoretical(emp, VariogramFamily::spherical);
    CHECK(std::abs(fit.sill - 0.8) < 1e-4);
    for (double h : {0.0, 0.5, 3.0, 9.0}) CHECK(std::abs(eval_theoretical(fit, h) - 0.8) < 1e-3);
}

TEST_CASE("fit_theoretical on noisy monotone bins stays inside the data envelope") {
    gen::Rng rng(56);
    for (int trial = 0; trial < 10; ++trial) {
        EmpiricalVariogram emp = exact_bins({0.2, 1.5, 2.5, VariogramFamily::spherical}, 25, 5.0);
        for (Eigen::Index k = 0; k < emp.size(); ++k) emp.semivariances[k] += gen::uniform(rng, -0.01, 0.01);
        for (Eigen::Index k = 1; k < emp.size(); ++k)
            emp.semivariances[k] = std::max(emp.semivariances[k], emp.semivariances[k - 1]);
        const auto fit = fit_theoretical(emp, VariogramFamily::spherical);
        const double lo = emp.semivariances.minCoeff(), hi = emp.semivariances.maxCoeff();
        double prev = -1e300;
        for (Eigen::Index k = 0; k < emp.size(); ++k) {
            const double v = eval_theoretical(fit, emp.bin_centers[k]);
            CHECK(v >= prev - 1e-12);
            CHECK(v >= lo - 0.02);
            CHECK(v <= hi + 0.02);
            prev = v;
        }
    }
}

TEST_CASE("fit_theoretical respects its bounds") {
    gen::Rng rng(57);
    for (int trial = 0; trial < 10; ++trial) {
        EmpiricalVariogram emp = exact_bins({0.0, 1.0, 1.0, VariogramFamily::spherical}, 12, 3.0);
        for (Eigen::Index k = 0; k < emp.size(); ++k) emp.semivariances[k] = gen::uniform(rng, 0, 2);
        const auto fit = fit_theoretical(emp, trial % 2 ? VariogramFamily::spherical : VariogramFamily::exponential);
        CHECK(fit.nugget >= 0.0);
        CHECK(fit.nugget <= fit.sill);
        CHECK(fit.range > 0.0);
        CHECK(fit.range <= 2 * emp.bin_centers.maxCoeff() + 1e-9);
    }
}

TEST_CASE("fit_theoretical is deterministic") {
    gen::Rng rng(58);
    EmpiricalVariogram emp = exact_bins({0.3, 1.0, 1.5, VariogramFamily::spherical}, 15, 3.0);
    for (Eigen::Index k = 0; k < emp.size(); ++k) emp.semivariances[k] += gen::uniform(rng, -0.1, 0.1);
    const auto a = fit_theoretical(emp, VariogramFamily::spherical);
    const auto b = fit_theoretical(emp, VariogramFamily::spherical);
    CHECK(a.nugget == b.nugget);
    CHECK(a.sill == b.sill);
    CHECK(a.range == b.range);
}

TEST_CASE("fit_theoretical needs three non-empty bins") {
    EmpiricalVariogram emp = exact_bins({0.1, 1.0, 2.0, VariogramFamily::spherical}, 5, 4.0);
    emp.counts = {3, 0, 0, 4, 0};
    CHECK_THROWS_AS(fit_theoretical(emp, VariogramFamily::spherical), InsufficientData);
}
