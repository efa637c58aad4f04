#include <doctest.h>

#include <cmath>
#include <string>

#include "generators.hpp"
#include "mcgta/errors.hpp"
#include "mcgta/gmrf_estimation.hpp"
#include "mcgta/logging.hpp"
#include "mcgta/synthetic.hpp"
#include "mcgta/wasserstein.hpp"

using namespace mcgta;

namespace {

double rel_frob(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) { return (a - b).norm() / std::max(1.0, b.norm()); }

// Penalized log-likelihood of a 2×2 precision [[a, b], [b, c]].
double objective(const Eigen::Matrix2d& s, double a, double b, double c, double lambda) {
    return std::log(a * c - b * b) - s(0, 0) * a - s(1, 1) * c - 2 * s(0, 1) * b - 2 * lambda * std::abs(b);
}

// Dense scan over the off-diagonal; a and c are profiled out in closed form.
Eigen::Matrix2d grid_precision(const Eigen::Matrix2d& s, double lambda) {
    double best = -1e300;
    Eigen::Matrix2d out;
    for (int k = -200000; k <= 200000; ++k) {
        const double b = k * 2e-5;
        const double det = (1 + std::sqrt(1 + 4 * s(0, 0) * s(1, 1) * b * b)) / (2 * s(0, 0) * s(1, 1));
        const double a = s(1, 1) * det, c = s(0, 0) * det;
        const double f = objective(s, a, b, c, lambda);
        if (f > best) {
            best = f;
            out << a, b, b, c;
        }
    }
    return out;
}

struct SilenceWarnings {
    std::vector<std::string> seen;
    SilenceWarnings() {
        set_warning_sink([this](const std::string& m) { seen.push_back(m); });
    }
    ~SilenceWarnings() { set_warning_sink(nullptr); }
};

}  // namespace

TEST_CASE("empirical_cov examples") {
    Eigen::MatrixXd two(2, 2);
    two << 0, 0, 2, 2;
    const auto [mean, cov] = empirical_cov(two);
    CHECK(mean.isApprox(Eigen::Vector2d(1, 1)));
    CHECK(cov.isApprox(Eigen::Matrix2d::Ones()));

    Eigen::MatrixXd same = Eigen::MatrixXd::Constant(5, 3, 1.5);
    CHECK(empirical_cov(same).second.isZero(0.0));

    gen::Rng rng(31);
    const auto [m50, c50] = empirical_cov(gen::gaussian_matrix(rng, 50, 4));
    CHECK((c50 - Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff() < 0.5);
    CHECK(is_symmetric(c50, 0.0));
}

TEST_CASE("empirical_cov errors") {
    CHECK_THROWS_AS(empirical_cov(Eigen::MatrixXd::Zero(1, 3)), InsufficientSamples);
    Eigen::MatrixXd nan = Eigen::MatrixXd::Zero(3, 2);
    nan(1, 1) = std::nan("");
    CHECK_THROWS_AS(empirical_cov(nan), InvalidInput);
}

TEST_CASE("shrunk_cov examples") {
    Eigen::Matrix2d d = Eigen::Vector2d(2, 4).asDiagonal();
    CHECK(shrunk_cov(d, 0.0) == Eigen::MatrixXd(d));
    CHECK(shrunk_cov(d, 1.0).isApprox(Eigen::Matrix2d(Eigen::Vector2d(3, 3).asDiagonal())));
    CHECK(shrunk_cov(d, 0.5).isApprox(Eigen::Matrix2d(Eigen::Vector2d(2.5, 3.5).asDiagonal())));
    CHECK_THROWS_AS(shrunk_cov(d, 1.5), InvalidInput);
    CHECK_THROWS_AS(shrunk_cov(d, -0.1), InvalidInput);
}

TEST_CASE("graphical_lasso with zero penalty returns the empirical covariance") {
    gen::Rng rng(32);
    for (int trial = 0; trial < 10; ++trial) {
        const Eigen::Index d = gen::integer(rng, 2, 8);
        const SymMatrix s = gen::spd(rng, d, 0.5, 2.0);
        CHECK(rel_frob(graphical_lasso(s, 0.0), s) < 1e-4);
    }
}

TEST_CASE("graphical_lasso keeps diagonal input diagonal") {
    Eigen::Matrix3d d = Eigen::Vector3d(1, 2, 3).asDiagonal();
    for (double lambda : {0.0, 0.1, 5.0}) {
        const SymMatrix w = graphical_lasso(d, lambda);
        CHECK(w.isApprox(Eigen::MatrixXd(d), 1e-12));
    }
}

TEST_CASE("graphical_lasso 2x2 matches a dense grid solve") {
    Eigen::Matrix2d s;
    s << 1, 0.8, 0.8, 1;
    double prev = 1e300;
    for (double lambda : {0.0, 0.1, 0.3, 0.5, 0.79, 0.9, 2.0}) {
        const auto [w, theta] = graphical_lasso_with_precision(s, lambda);
        const Eigen::Matrix2d grid = grid_precision(s, lambda);
        CHECK(theta(0, 1) == doctest::Approx(grid(0, 1)).epsilon(1e-3).scale(1.0));
        CHECK(std::abs(theta(0, 1) - grid(0, 1)) < 2e-4 * std::max(1.0, std::abs(grid(0, 1))));
        CHECK(objective(s, theta(0, 0), theta(0, 1), theta(1, 1), lambda) >=
              objective(s, grid(0, 0), grid(0, 1), grid(1, 1), lambda) - 1e-6);
        // Covariance off-diagonal is the soft-thresholded input.
        CHECK(w(0, 1) == doctest::Approx(std::max(0.0, 0.8 - lambda)).epsilon(1e-6));
        CHECK(std::abs(theta(0, 1)) <= prev + 1e-12);
        prev = std::abs(theta(0, 1));
    }
    // Frozen: λ = 0.5 leaves w12 = 0.3, so θ12 = −0.3 / 0.91.
    CHECK(graphical_lasso_with_precision(s, 0.5).second(0, 1) == doctest::Approx(-0.32967032967).epsilon(1e-6));
    CHECK(graphical_lasso_with_precision(s, 2.0).second(0, 1) == doctest::Approx(0.0));
}

TEST_CASE("graphical_lasso output is SPD and satisfies the KKT conditions") {
    gen::Rng rng(33);
    for (int trial = 0; trial < 20; ++trial) {
        const Eigen::Index d = gen::integer(rng, 2, 10);
        const auto [mean, s] = empirical_cov(gen::gaussian_matrix(rng, 30, d));
        const double lambda = gen::uniform(rng, 0.01, 0.3);
        const auto [w, theta] = graphical_lasso_with_precision(s, lambda);
        CHECK(sym_eigenvalues(w).minCoeff() > 0.0);
        CHECK(w.diagonal().isApprox(s.diagonal(), 1e-10));
        for (Eigen::Index i = 0; i < d; ++i)
            for (Eigen::Index j = 0; j < d; ++j)
                if (i != j) CHECK(std::abs(w(i, j) - s(i, j)) <= lambda + 1e-3);
    }
}

TEST_CASE("graphical_lasso failure modes") {
    Eigen::Matrix2d zero_var;
    zero_var << 0, 0, 0, 1;
    CHECK_THROWS_AS(graphical_lasso(zero_var, 0.1), ConvergenceFailure);

    gen::Rng rng(34);
    const auto [mean, s] = empirical_cov(gen::gaussian_matrix(rng, 8, 6));
    GlassoOptions strict;
    strict.max_iter = 1;
    strict.tol = 1e-300;
    try {
        graphical_lasso(s, 0.01, strict);
        FAIL("expected ConvergenceFailure");
    } catch (const ConvergenceFailure& e) {
        CHECK(e.last_iterate().rows() == 6);
        CHECK(e.last_iterate().allFinite());
    }
    CHECK_THROWS_AS(graphical_lasso(s, -1.0), InvalidInput);
}

TEST_CASE("graphical_lasso on 1x1 input") {
    Eigen::MatrixXd one(1, 1);
    one << 2.5;
    CHECK(graphical_lasso(one, 0.3)(0, 0) == 2.5);
}

TEST_CASE("estimator helpers") {
    CHECK(estimator_id(GlassoEstimator{}) == "glasso");
    CHECK(estimator_id(ShrunkEstimator{}) == "shrunk");
    CHECK(estimator_regularization(GlassoEstimator{0.2}) == 0.2);
    CHECK(estimator_regularization(ShrunkEstimator{0.3}) == 0.3);
    CHECK_THROWS_AS(validate(EstimatorKind{GlassoEstimator{-0.1}}), InvalidInput);
    CHECK_THROWS_AS(validate(EstimatorKind{ShrunkEstimator{2.0}}), InvalidInput);
}

TEST_CASE("fit_all_models with duplicated features falls back to the floor") {
    SilenceWarnings quiet;
    Dataset ds;
    for (int i = 0; i < 12; ++i) {
        Observation o;
        o.features = Eigen::Vector3d(1, 2, 3);
        o.position = Position::Constant(1, double(i));
        ds.push_back(o);
    }
    FitStats stats;
    const auto models = fit_all_models(ds, 4, GlassoEstimator{0.01}, MetricKind::absolute_index, &stats);
    REQUIRE(models.size() == 12);
    for (const auto& m : models) {
        CHECK(m.covariance.isApprox(kRepairFloor * Eigen::Matrix3d::Identity(), 1e-9));
        CHECK(m.mean.isApprox(Eigen::Vector3d(1, 2, 3)));
    }
    CHECK(stats.passes == 1);
    CHECK(stats.fits == 12);
    CHECK(stats.fallbacks == 12);
    CHECK(!quiet.seen.empty());
}

TEST_CASE("fit_all_models with n = N - 1 gives identical models") {
    gen::Rng rng(35);
    Dataset ds;
    for (int i = 0; i < 10; ++i) {
        Observation o;
        o.features = gen::gaussian_matrix(rng, 3, 1);
        o.position = Position::Constant(1, double(i));
        ds.push_back(o);
    }
    for (EstimatorKind est : {EstimatorKind{GlassoEstimator{0.05}}, EstimatorKind{ShrunkEstimator{0.2}}}) {
        const auto models = fit_all_models(ds, 9, est, MetricKind::absolute_index);
        for (const auto& m : models) {
            CHECK(m.mean.isApprox(models.front().mean, 1e-12));
            CHECK(m.covariance.isApprox(models.front().covariance, 1e-12));
        }
    }
}

TEST_CASE("fit_all_models warns when n_neighbors is below the feature dimension") {
    SilenceWarnings quiet;
    gen::Rng rng(36);
    Dataset ds;
    for (int i = 0; i < 20; ++i) ds.push_back({gen::gaussian_matrix(rng, 6, 1), Position::Constant(1, double(i))});
    const auto models = fit_all_models(ds, 3, ShrunkEstimator{0.1}, MetricKind::absolute_index);
    CHECK(models.size() == 20);
    bool warned = false;
    for (const auto& m : quiet.seen) warned |= m.find("n_neighbors") != std::string::npos;
    CHECK(warned);
    CHECK_THROWS_AS(fit_all_models(ds, 20, ShrunkEstimator{0.1}, MetricKind::absolute_index), InvalidInput);
    CHECK_THROWS_AS(fit_all_models(ds, 0, ShrunkEstimator{0.1}, MetricKind::absolute_index), InvalidInput);
}

TEST_CASE("fitted covariances always clear the eigenvalue floor") {
    SilenceWarnings quiet;
    gen::Rng rng(37);
    for (int trial = 0; trial < 5; ++trial) {
        Dataset ds;
        const Eigen::Index d = gen::integer(rng, 2, 8);
        for (int i = 0; i < 40; ++i) {
            ds.push_back({gen::gaussian_matrix(rng, d, 1), gen::positions(rng, 1, 2).front()});
        }
        const auto models = fit_all_models(ds, gen::integer(rng, 1, 20), GlassoEstimator{0.01}, MetricKind::euclidean);
        for (const auto& m : models) CHECK(sym_eigenvalues(m.covariance).minCoeff() >= 1e-10);
    }
}

TEST_CASE("temporal models of one cluster are closer than models of different clusters") {
    SilenceWarnings quiet;
    SynthConfig cfg;
    cfg.seed = 5;
    cfg.batch = 10;
    const auto syn = gen_temporal(cfg);
    const auto models = fit_all_models(syn.observations, 20, GlassoEstimator{0.01}, MetricKind::absolute_index);
    double within = 0.0, across = 0.0;
    long nw = 0, na = 0;
    for (std::size_t i = 0; i < models.size(); i += 7) {
        for (std::size_t j = i + 7; j < models.size(); j += 7) {
            const double w = w2_squared(models[i], models[j]);
            if (syn.truth[i] == syn.truth[j]) {
                within += w;
                ++nw;
            } else {
                across += w;
                ++na;
            }
        }
    }
    REQUIRE(nw > 0);
    REQUIRE(na > 0);
    CHECK(within / nw < across / na);
}
