#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "crossmatch/error.hpp"
#include "crossmatch/estimate.hpp"
#include "crossmatch/matching.hpp"
#include "crossmatch/simulate.hpp"

using namespace crossmatch;

namespace {

std::vector<double> class_mean(const LabeledDataset& ds, Label which) {
    std::vector<double> mean(ds.dim(), 0.0);
    std::size_t count = 0;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        if (ds.label(i) != which) continue;
        for (std::size_t k = 0; k < ds.dim(); ++k) mean[k] += ds.point(i)[k];
        ++count;
    }
    for (auto& x : mean) x /= static_cast<double>(count);
    return mean;
}

ExperimentOptions quick(std::size_t trials, std::uint64_t seed = 1) {
    ExperimentOptions o;
    o.trials = trials;
    o.seed = seed;
    o.oracle_samples = 20'000;
    return o;
}

}  // namespace

TEST_CASE("gaussian sampling layout and moments") {
    const auto spec = GaussianSpec::isotropic(1, 0.0, 0.0);
    const auto ds = sample_gaussian(spec, 20'000, 20'000, 3);
    CHECK(ds.size() == 40'000);
    CHECK(ds.label(0) == 0);
    CHECK(ds.label(19'999) == 0);
    CHECK(ds.label(20'000) == 1);
    double mean = 0.0;
    for (double x : ds.coords()) mean += x;
    mean /= 40'000.0;
    CHECK(std::abs(mean) < 4.0 / std::sqrt(40'000.0));

    const auto shifted = sample_gaussian(GaussianSpec::isotropic(2, 0.0, 2.0), 500, 500, 4);
    const auto m1 = class_mean(shifted, 1);
    for (double x : m1) CHECK(std::abs(x - 2.0) < 4.0 * std::sqrt(2.0 / 500.0));
}

TEST_CASE("sampling is deterministic in the seed") {
    const auto spec = GaussianSpec::isotropic(3, 0.0, 1.0);
    const auto a = sample_gaussian(spec, 50, 70, 99);
    const auto b = sample_gaussian(spec, 50, 70, 99);
    CHECK(std::equal(a.coords().begin(), a.coords().end(), b.coords().begin()));
    const auto c = sample_gaussian(spec, 50, 70, 100);
    CHECK_FALSE(std::equal(a.coords().begin(), a.coords().end(), c.coords().begin()));
}

TEST_CASE("full covariance is honoured") {
    GaussianSpec spec;
    spec.dim = 2;
    spec.mean0 = {0.0, 0.0};
    spec.mean1 = {0.0, 0.0};
    spec.covariance = Covariance::full({2.0, 0.8, 0.8, 1.0});
    const auto ds = sample_gaussian(spec, 20'000, 20'000, 5);
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const auto p = ds.point(i);
        sxx += p[0] * p[0];
        sxy += p[0] * p[1];
        syy += p[1] * p[1];
    }
    const double n = static_cast<double>(ds.size());
    CHECK(sxx / n == doctest::Approx(2.0).epsilon(0.05));
    CHECK(sxy / n == doctest::Approx(0.8).epsilon(0.08));
    CHECK(syy / n == doctest::Approx(1.0).epsilon(0.05));

    spec.covariance = Covariance::diagonal({4.0, 0.25});
    const auto diag = sample_gaussian(spec, 20'000, 20'000, 6);
    double vx = 0, vy = 0;
    for (std::size_t i = 0; i < diag.size(); ++i) {
        vx += diag.point(i)[0] * diag.point(i)[0];
        vy += diag.point(i)[1] * diag.point(i)[1];
    }
    CHECK(vx / n == doctest::Approx(4.0).epsilon(0.05));
    CHECK(vy / n == doctest::Approx(0.25).epsilon(0.05));
}

TEST_CASE("gaussian spec validation") {
    GaussianSpec spec = GaussianSpec::isotropic(2, 0.0, 1.0);
    spec.covariance = Covariance::full({1.0, 2.0, 2.0, 1.0});
    CHECK_THROWS_AS(spec.validate(), NumericError);
    spec.covariance = Covariance::full({1.0, 0.5, 0.4, 1.0});
    CHECK_THROWS_AS(spec.validate(), NumericError);
    spec.covariance = Covariance::diagonal({1.0, 0.0});
    CHECK_THROWS_AS(spec.validate(), NumericError);
    spec.covariance = Covariance::diagonal({1.0});
    CHECK_THROWS_AS(spec.validate(), DataError);
    spec = GaussianSpec::isotropic(2, 0.0, 1.0);
    spec.mean1 = {1.0};
    CHECK_THROWS_AS(spec.validate(), DataError);
    spec = GaussianSpec::isotropic(2, 0.0, 1.0, 0.7);
    CHECK_NOTHROW(spec.validate());
    spec.c1 = 0.5;
    CHECK_THROWS_AS(spec.validate(), DataError);
    CHECK_THROWS_AS(sample_gaussian(GaussianSpec::isotropic(2, 0, 1), 0, 5, 1), std::invalid_argument);
}

TEST_CASE("oracle limits") {
    const auto same = hp_oracle_gaussian(GaussianSpec::isotropic(2, 0.0, 0.0), 100'000, 1);
    CHECK(std::abs(same.value) <= 3.0 * same.std_error + 1e-12);

    const auto far = hp_oracle_gaussian(GaussianSpec::isotropic(1, 0.0, 20.0), 100'000, 1);
    CHECK(std::abs(far.value - 1.0) <= 3.0 * far.std_error + 1e-9);

    CHECK_THROWS_AS(hp_oracle_gaussian(GaussianSpec::isotropic(1, 0.0, 1.0), 9'999, 1), std::invalid_argument);
}

TEST_CASE("oracle is stable across seeds") {
    const auto spec = GaussianSpec::isotropic(2, 0.0, 1.0);
    const auto a = hp_oracle_gaussian(spec, 1'000'000, 1);
    const auto b = hp_oracle_gaussian(spec, 1'000'000, 2);
    CHECK(std::abs(a.value - b.value) < 1e-3 + 4.0 * a.std_error);
    CHECK(a.std_error < 5e-4);
    // Unequal priors.
    const auto skew = hp_oracle_gaussian(GaussianSpec::isotropic(2, 0.0, 1.0, 0.8), 100'000, 3);
    CHECK(skew.value > 0.0);
    CHECK(skew.value < 1.0);
}

TEST_CASE("sample-size experiment rows, determinism and single trial") {
    const auto spec = GaussianSpec::isotropic(2, 0.0, 1.0);
    const auto r = experiment_sample_size(spec, {20, 40}, quick(4));
    CHECK(r.rows.size() == 4);
    CHECK(r.experiment == "samplesize");
    CHECK(r.row(20, "owm").trials == 4);
    CHECK(r.row(40, "fr").seed == 1);
    CHECK_FALSE(std::isnan(r.row(40, "owm").mse));
    CHECK_THROWS_AS(r.row(30, "owm"), std::out_of_range);

    const auto again = experiment_sample_size(spec, {20, 40}, quick(4));
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
        CHECK(r.rows[i].mean == again.rows[i].mean);
        CHECK(r.rows[i].std == again.rows[i].std);
        CHECK(r.rows[i].mse == again.rows[i].mse);
    }

    const auto single = experiment_sample_size(spec, {20}, quick(1));
    CHECK(single.single_trial);
    CHECK(single.row(20, "owm").std == 0.0);

    CHECK_THROWS_AS(experiment_sample_size(spec, {}, quick(2)), std::invalid_argument);
    CHECK_THROWS_AS(experiment_sample_size(spec, {21}, quick(2)), std::invalid_argument);
    CHECK_THROWS_AS(experiment_sample_size(spec, {40, 20}, quick(2)), std::invalid_argument);
    CHECK_THROWS_AS(experiment_sample_size(spec, {20}, quick(0)), std::invalid_argument);
}

TEST_CASE("equal distributions give estimates near zero") {
    const auto r = experiment_sample_size(GaussianSpec::isotropic(2, 0.0, 0.0), {1000}, quick(8, 2));
    CHECK(std::abs(r.row(1000, "owm").mean) < 0.05);
    CHECK(std::abs(r.row(1000, "fr").mean) < 0.05);
}

TEST_CASE("dimension experiment") {
    const auto r = experiment_dimension(DimensionTemplate{}, {2, 3}, 60, quick(3));
    CHECK(r.rows.size() == 4);
    CHECK(r.row(3, "fr").oracle > 0.0);
    CHECK(r.row(2, "owm").oracle == r.row(2, "fr").oracle);
    CHECK_THROWS_AS(experiment_dimension(DimensionTemplate{}, {}, 60, quick(3)), std::invalid_argument);
    CHECK_THROWS_AS(experiment_dimension(DimensionTemplate{}, {0, 1}, 60, quick(3)), std::invalid_argument);
    CHECK_THROWS_AS(experiment_dimension(DimensionTemplate{}, {2}, 61, quick(3)), std::invalid_argument);
}

TEST_CASE("assumption-1 experiment on the minimal sample") {
    const auto r = experiment_assumption1(GaussianSpec::isotropic(2, 0.0, 1.0), {4, 10}, quick(200, 3));
    CHECK(r.rows.size() == 2);
    // A(4) <= 2 and A(6) <= 3.
    CHECK(r.row(4, "adiff").max <= 3.0);
    CHECK(r.row(10, "adiff").mean <= 3.0);
    CHECK(std::isnan(r.row(4, "adiff").mse));
}

TEST_CASE("duplicated points pair with their copies") {
    // Pairing each copy with its source costs nothing, so the optimum of the
    // grown sample equals the optimum of the sample without the two sources.
    const auto spec = GaussianSpec::isotropic(2, 0.0, 1.0);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto base = sample_gaussian(spec, 30, 30, seed);
        const std::size_t picks[] = {seed % 30, 30 + seed % 30};
        std::vector<double> coords(base.coords().begin(), base.coords().end());
        std::vector<Label> labels(base.labels().begin(), base.labels().end());
        std::vector<double> rest_coords;
        std::vector<Label> rest_labels;
        for (std::size_t i = 0; i < base.size(); ++i) {
            if (i == picks[0] || i == picks[1]) continue;
            rest_coords.insert(rest_coords.end(), base.point(i).begin(), base.point(i).end());
            rest_labels.push_back(base.label(i));
        }
        for (std::size_t src : picks) {
            coords.insert(coords.end(), base.point(src).begin(), base.point(src).end());
            labels.push_back(base.label(src));
        }
        const LabeledDataset grown(2, coords, labels);
        const LabeledDataset rest(2, rest_coords, rest_labels);
        const double w_grown = min_weight_perfect_matching(pairwise_distances(grown)).total_weight;
        const double w_rest = min_weight_perfect_matching(pairwise_distances(rest)).total_weight;
        CHECK(w_grown == doctest::Approx(w_rest).epsilon(1e-12));
        CHECK(cross_match_count(grown) <= 32);
    }
}

TEST_CASE("results CSV and SVG") {
    ExperimentResult r;
    r.experiment = "samplesize";
    r.rows.push_back({100, "owm", 0.5, 0.1, 0.01, 0.05, 0.7, 0.49, 3, 7});
    r.rows.push_back({100, "fr", 0.25, 0.0, NAN, NAN, 0.25, NAN, 3, 7});
    std::ostringstream csv;
    write_results_csv(csv, r);
    CHECK(csv.str() == "sweep_value,method,mean,std,mse,trials,seed\n100,owm,0.5,0.1,0.01,3,7\n100,fr,0.25,0,,3,7\n");
    std::ostringstream svg;
    write_results_svg(svg, r, "N");
    CHECK(svg.str().rfind("<svg", 0) == 0);
    CHECK(svg.str().find("</svg>") != std::string::npos);
    CHECK_THROWS_AS(write_results_svg(svg, ExperimentResult{}, "N"), std::invalid_argument);
}
