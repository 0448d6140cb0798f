#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "crossmatch/divergence.hpp"
#include "crossmatch/error.hpp"

using namespace crossmatch;

namespace {

std::vector<double> random_simplex(std::mt19937_64& rng, std::size_t bins, double zero_rate = 0.0) {
    std::exponential_distribution<double> ex;
    std::uniform_real_distribution<double> u;
    std::vector<double> p(bins);
    double s = 0.0;
    for (auto& x : p) {
        x = u(rng) < zero_rate ? 0.0 : ex(rng);
        s += x;
    }
    if (s == 0.0) {
        p[0] = 1.0;
        return p;
    }
    for (auto& x : p) x /= s;
    return p;
}

DiscretePair random_pair(std::mt19937_64& rng, std::size_t bins) {
    std::uniform_real_distribution<double> u(0.02, 0.98);
    const double c0 = u(rng);
    return {c0, 1.0 - c0, random_simplex(rng, bins, 0.2), random_simplex(rng, bins, 0.2)};
}

}  // namespace

TEST_CASE("cross-match estimator examples") {
    auto r = hp_estimate_crossmatch(33, 241, 488);
    CHECK(r.estimate_raw == doctest::Approx(1.0 - 729.0 * 33.0 / (488.0 * 241.0)));
    CHECK(r.estimate_raw == doctest::Approx(0.7955).epsilon(1e-4));
    CHECK(r.priors.c0 == doctest::Approx(488.0 / 729.0));
    CHECK(r.kind == StatisticKind::cross_match);

    // A at its null mean mn/(N-1) gives -1/(N-1), clamped to 0.
    r = hp_estimate_crossmatch(1, 1, 3);
    CHECK(r.estimate_raw == doctest::Approx(-1.0 / 3.0));
    CHECK(r.estimate == 0.0);
    r = hp_estimate_crossmatch(1, 1, 1);
    CHECK(r.estimate_raw == doctest::Approx(-1.0));

    r = hp_estimate_crossmatch(0, 10, 30);
    CHECK(r.estimate == 1.0);
    CHECK(r.u_c == doctest::Approx(1.0));
    CHECK(r.bayes_upper == doctest::Approx(0.0));

    CHECK_THROWS_AS(hp_estimate_crossmatch(0, 0, 5), DataError);
}

TEST_CASE("friedman-rafsky estimator examples") {
    CHECK(hp_estimate_fr(1, 1, 1).estimate_raw == doctest::Approx(0.0));
    CHECK(hp_estimate_fr(2, 2, 2).estimate_raw == doctest::Approx(0.0));
    const auto r = hp_estimate_fr(30, 100, 100);
    CHECK(r.estimate_raw == doctest::Approx(1.0 - 200.0 * 30.0 / 20000.0));
    CHECK(r.kind == StatisticKind::friedman_rafsky);
}

TEST_CASE("prior override and validation") {
    const auto r = hp_estimate_crossmatch(10, 50, 50, Priors::from_c0(0.3));
    CHECK(r.priors.c0 == 0.3);
    CHECK(r.u_c == doctest::Approx(4 * 0.3 * 0.7 * r.estimate + 0.16));
    CHECK_THROWS_AS(hp_estimate_crossmatch(10, 50, 50, Priors{0.5, 0.6}), DataError);
    CHECK_THROWS_AS(Priors::from_c0(0.0).validate(), DataError);
    CHECK_NOTHROW(Priors::from_c0(0.25).validate());
}

TEST_CASE("bayes bounds") {
    auto b = bayes_bounds(0.0);
    CHECK(b.lower == 0.5);
    CHECK(b.upper == 0.5);
    b = bayes_bounds(1.0);
    CHECK(b.lower == 0.0);
    CHECK(b.upper == 0.0);
    CHECK_THROWS_AS(bayes_bounds(-0.1), std::invalid_argument);
    CHECK_THROWS_AS(bayes_bounds(1.5), std::invalid_argument);
    CHECK_THROWS_AS(bayes_bounds(NAN), std::invalid_argument);

    const Priors pr{488.0 / 729.0, 241.0 / 729.0};
    const double u = affinity_from_divergence(0.791, pr);
    CHECK(bayes_bounds(u).upper == doctest::Approx(0.0925).epsilon(0.005));
}

TEST_CASE("property: bounds are ordered and monotone in u") {
    double prev_lower = 0.5, prev_upper = 0.5;
    for (int i = 0; i <= 1000; ++i) {
        const double u = i / 1000.0;
        const auto b = bayes_bounds(u);
        CHECK(b.lower <= b.upper + 1e-15);
        CHECK(b.lower <= prev_lower + 1e-15);
        CHECK(b.upper <= prev_upper + 1e-15);
        prev_lower = b.lower;
        prev_upper = b.upper;
    }
}

TEST_CASE("property: affinity is monotone in the divergence") {
    for (double c0 : {0.1, 0.33, 0.5, 0.9}) {
        const auto pr = Priors::from_c0(c0);
        double prev = -1.0;
        for (int i = 0; i <= 100; ++i) {
            const double u = affinity_from_divergence(i / 100.0, pr);
            CHECK(u >= prev);
            CHECK(u >= 0.0);
            CHECK(u <= 1.0);
            prev = u;
        }
        CHECK(affinity_from_divergence(1.0, pr) == doctest::Approx(1.0));
    }
}

TEST_CASE("discrete Bayes error examples") {
    CHECK(discrete_bayes_error(DiscretePair(0.5, 0.5, {0.3, 0.7}, {0.3, 0.7})) == doctest::Approx(0.5));
    CHECK(discrete_bayes_error(DiscretePair(0.2, 0.8, {1.0, 0.0}, {0.0, 1.0})) == 0.0);
    CHECK(discrete_bayes_error_by_regions(DiscretePair(0.2, 0.8, {1.0, 0.0}, {0.0, 1.0})) == 0.0);

    std::mt19937_64 rng(1);
    const auto dp = random_pair(rng, 8);
    double oracle = 0.0;
    for (std::size_t b = 0; b < 8; ++b) {
        const double a = dp.c0() * dp.p0()[b];
        const double c = dp.c1() * dp.p1()[b];
        oracle += a < c ? a : c;
    }
    CHECK(discrete_bayes_error(dp) == doctest::Approx(oracle).epsilon(1e-14));
    CHECK(discrete_bayes_error_by_regions(dp) == doctest::Approx(oracle).epsilon(1e-14));
}

TEST_CASE("discrete affinity and divergence examples") {
    const DiscretePair same(0.5, 0.5, {0.25, 0.25, 0.25, 0.25}, {0.25, 0.25, 0.25, 0.25});
    CHECK(discrete_affinity(same) == doctest::Approx(0.0));
    CHECK(discrete_hp_divergence(same) == doctest::Approx(0.0));

    const DiscretePair disjoint(0.3, 0.7, {0.5, 0.5, 0.0}, {0.0, 0.0, 1.0});
    CHECK(discrete_affinity(disjoint) == doctest::Approx(1.0));
    CHECK(discrete_hp_divergence(disjoint) == doctest::Approx(1.0));

    const DiscretePair worked(0.5, 0.5, {0.75, 0.25}, {0.25, 0.75});
    CHECK(discrete_hp_divergence(worked) == doctest::Approx(0.25));
    CHECK(discrete_affinity(worked) == doctest::Approx(0.25));
}

TEST_CASE("discrete pair validation") {
    CHECK_THROWS_AS(DiscretePair(0.5, 0.5, {1.0}, {0.5, 0.5}), DataError);
    CHECK_THROWS_AS(DiscretePair(0.5, 0.5, {}, {}), DataError);
    CHECK_THROWS_AS(DiscretePair(0.5, 0.5, {0.6, 0.6}, {0.5, 0.5}), DataError);
    CHECK_THROWS_AS(DiscretePair(0.5, 0.5, {-0.5, 1.5}, {0.5, 0.5}), DataError);
    CHECK_THROWS_AS(DiscretePair(0.6, 0.6, {1.0}, {1.0}), DataError);
    CHECK_THROWS_AS(DiscretePair(0.0, 1.0, {1.0}, {1.0}), DataError);
}

TEST_CASE("property: identity, sandwich and class symmetry on random pairs") {
    std::mt19937_64 rng(2);
    for (int rep = 0; rep < 2000; ++rep) {
        const auto dp = random_pair(rng, 2 + rep % 63);
        const double h = discrete_affinity(dp);
        const double dc = discrete_hp_divergence(dp);
        const double c0 = dp.c0(), c1 = dp.c1();
        CHECK(std::abs(h - (4 * c0 * c1 * dc + (c0 - c1) * (c0 - c1))) <= 1e-12);
        const double eps = discrete_bayes_error(dp);
        const auto b = bayes_bounds(std::clamp(h, 0.0, 1.0));
        CHECK(b.lower <= eps + 1e-12);
        CHECK(eps <= b.upper + 1e-12);
        CHECK(dc >= -1e-12);
        CHECK(dc <= 1.0 + 1e-12);

        const auto sw = dp.swapped();
        CHECK(discrete_affinity(sw) == doctest::Approx(h).epsilon(1e-12));
        CHECK(discrete_hp_divergence(sw) == doctest::Approx(dc).epsilon(1e-12));
        CHECK(discrete_bayes_error(sw) == doctest::Approx(eps).epsilon(1e-12));
    }
}

TEST_CASE("histogram rule") {
    const std::vector<std::pair<std::size_t, Label>> train{{4, 0}, {4, 0}, {4, 0}, {4, 1}, {7, 0}, {7, 0}, {7, 1},
                                                           {7, 1}, {9, 1}, {9, 1}, {9, 1}};
    const auto rule = HistogramRule::fit(train);
    CHECK(rule.classify(4) == 0);
    CHECK(rule.classify(7) == 0);
    CHECK(rule.classify(9) == 1);
    // 5 zeros and 6 ones overall.
    CHECK(rule.fallback() == 1);
    CHECK(rule.classify(123) == 1);

    const std::vector<std::pair<std::size_t, Label>> tie{{0, 0}, {1, 1}};
    CHECK(HistogramRule::fit(tie).fallback() == 0);
    CHECK_THROWS_AS(HistogramRule::fit({}), std::invalid_argument);
}

TEST_CASE("property: histogram rule never beats the Bayes error") {
    std::mt19937_64 rng(3);
    for (int rep = 0; rep < 200; ++rep) {
        const std::size_t bins = 2 + rep % 10;
        const auto dp = random_pair(rng, bins);
        std::vector<std::pair<std::size_t, Label>> train;
        std::discrete_distribution<std::size_t> d0(dp.p0().begin(), dp.p0().end());
        std::discrete_distribution<std::size_t> d1(dp.p1().begin(), dp.p1().end());
        std::bernoulli_distribution coin(dp.c1());
        for (int i = 0; i < 30; ++i) {
            const Label y = coin(rng) ? 1 : 0;
            train.emplace_back(y ? d1(rng) : d0(rng), y);
        }
        const auto rule = HistogramRule::fit(train);
        double oracle = 0.0;
        for (std::size_t b = 0; b < bins; ++b)
            oracle += rule.classify(b) == 0 ? dp.c1() * dp.p1()[b] : dp.c0() * dp.p0()[b];
        CHECK(rule.expected_error(dp) == doctest::Approx(oracle).epsilon(1e-12));
        CHECK(rule.expected_error(dp) >= discrete_bayes_error(dp) - 1e-12);
    }
}
