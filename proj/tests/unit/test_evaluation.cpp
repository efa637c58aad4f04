#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "generators.hpp"
#include "reference_metrics.hpp"
#include "mcgta/errors.hpp"
#include "mcgta/evaluation.hpp"

using namespace mcgta;


TEST_CASE("ari examples") {
    const std::vector<int> t{0, 0, 1, 1};
    CHECK(ari(t, std::vector<int>{1, 1, 0, 0}) == 1.0);
    CHECK(ari(t, std::vector<int>{0, 1, 0, 1}) == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(ari(t, t) == 1.0);
}

TEST_CASE("nmi examples") {
    const std::vector<int> t{0, 0, 1, 1};
    CHECK(nmi(t, std::vector<int>{5, 5, 7, 7}) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(nmi(t, std::vector<int>{0, 0, 0, 0}) == 0.0);
    CHECK(nmi(t, std::vector<int>{0, 1, 0, 1}) == doctest::Approx(0.0).epsilon(1e-15).scale(1.0));
    CHECK(nmi(std::vector<int>{3, 3, 3}, std::vector<int>{1, 1, 1}) == 1.0);
}

TEST_CASE("metrics reject bad lengths") {
    CHECK_THROWS_AS(ari(std::vector<int>{0, 1}, std::vector<int>{0}), InvalidInput);
    CHECK_THROWS_AS(nmi(std::vector<int>{0, 1}, std::vector<int>{0, 1, 1}), InvalidInput);
    CHECK_THROWS_AS(ari(std::vector<int>{0}, std::vector<int>{0}), InvalidInput);
}

TEST_CASE("noise labels count as singleton clusters") {
    const std::vector<int> t{0, 0, 1, 1};
    const std::vector<int> p{kNoiseLabel, kNoiseLabel, 1, 1};
    const auto table = contingency(t, p);
    CHECK(table.pred_sizes.size() == 3);
    CHECK(table.total == 4);
    CHECK(ari(t, p) < 1.0);
    CHECK(ari(t, p) == ref::ari(t, p));
}

TEST_CASE("ari and nmi match brute-force references on small instances") {
    gen::Rng rng(81);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto n = static_cast<std::size_t>(gen::integer(rng, 2, 12));
        auto t = gen::labels(rng, n, gen::integer(rng, 1, 5));
        auto p = gen::labels(rng, n, gen::integer(rng, 1, 5));
        for (auto& v : p) if (gen::integer(rng, 0, 9) == 0) v = kNoiseLabel;
        CHECK(std::abs(ari(t, p) - ref::ari(t, p)) <= 1e-12);
        CHECK(std::abs(nmi(t, p) - ref::nmi(t, p)) <= 1e-12);
    }
}

TEST_CASE("metrics are invariant under label permutation") {
    gen::Rng rng(82);
    for (int trial = 0; trial < 100; ++trial) {
        const auto t = gen::labels(rng, 40, 4);
        const auto p = gen::labels(rng, 40, 3);
        std::vector<int> perm{10, 20, 30, 40};
        std::shuffle(perm.begin(), perm.end(), rng);
        std::vector<int> tp(t.size());
        for (std::size_t i = 0; i < t.size(); ++i) tp[i] = perm[static_cast<std::size_t>(t[i])];
        CHECK(ari(tp, p) == doctest::Approx(ari(t, p)).epsilon(1e-12));
        CHECK(nmi(tp, p) == doctest::Approx(nmi(t, p)).epsilon(1e-12));
        CHECK(nmi(t, p) >= 0.0);
        CHECK(nmi(t, p) <= 1.0);
        CHECK(ari(t, p) <= 1.0);
    }
}

TEST_CASE("ari of shuffled labels concentrates near zero") {
    gen::Rng rng(83);
    std::vector<int> truth(200);
    for (std::size_t i = 0; i < truth.size(); ++i) truth[i] = int(i % 4);
    std::vector<double> scores;
    for (int s = 0; s < 100; ++s) {
        auto shuffled = truth;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        scores.push_back(ari(truth, shuffled));
    }
    std::sort(scores.begin(), scores.end());
    CHECK(std::abs(scores[50]) < 0.05);
}
