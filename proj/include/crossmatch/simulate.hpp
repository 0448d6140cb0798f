#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "crossmatch/dataset.hpp"

namespace crossmatch {

/// Shared class covariance: identity, a diagonal of variances, or a full
/// symmetric positive definite matrix (row-major) factored by Cholesky.
struct Covariance {
    enum class Kind { identity, diagonal, full };

    Kind kind = Kind::identity;
    std::vector<double> values;

    static Covariance identity() { return {}; }
    static Covariance diagonal(std::vector<double> variances) { return {Kind::diagonal, std::move(variances)}; }
    static Covariance full(std::vector<double> matrix) { return {Kind::full, std::move(matrix)}; }
};

/// Two Gaussian classes with a common covariance.
struct GaussianSpec {
    std::size_t dim = 2;
    std::vector<double> mean0;
    std::vector<double> mean1;
    Covariance covariance;
    double c0 = 0.5;
    double c1 = 0.5;

    /// mean0 = [a]_d, mean1 = [b]_d, identity covariance.
    static GaussianSpec isotropic(std::size_t dim, double a, double b, double c0 = 0.5);

    /// Throws NumericError for a non positive definite covariance and
    /// DataError for shape or prior problems.
    void validate() const;
};

/// n class-0 rows followed by m class-1 rows. Deterministic in seed.
LabeledDataset sample_gaussian(const GaussianSpec& spec, std::size_t m, std::size_t n, std::uint64_t seed);

struct OracleValue {
    double value = 0.0;
    double std_error = 0.0;
};

/// Monte Carlo value of the Henze-Penrose divergence between the two
/// classes, sampling from the mixture c0 p0 + c1 p1 and averaging the
/// squared posterior difference. Needs samples >= 10^4.
OracleValue hp_oracle_gaussian(const GaussianSpec& spec, std::size_t samples, std::uint64_t seed);

struct ExperimentRow {
    double sweep_value = 0.0;
    std::string method;  // "owm", "fr" or "adiff"
    double mean = 0.0;
    double std = 0.0;
    double mse = 0.0;    // NaN when there is no reference value
    double mae = 0.0;    // mean absolute error; NaN without reference
    double max = 0.0;    // largest per-trial value
    double oracle = 0.0; // reference value; NaN when absent
    std::size_t trials = 0;
    std::uint64_t seed = 0;
};

struct ExperimentResult {
    std::string experiment;
    std::vector<ExperimentRow> rows;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    /// Set when trials == 1: the reported standard deviations are 0 by convention.
    bool single_trial = false;

    const ExperimentRow& row(double sweep_value, const std::string& method) const;
};

struct ExperimentOptions {
    std::size_t trials = 50;
    std::uint64_t seed = 0;
    std::size_t oracle_samples = 1'000'000;
};

/// Both estimators over total sample sizes N (m = n = N/2), with the
/// Monte Carlo oracle as reference. Sizes must be even and ascending.
ExperimentResult experiment_sample_size(const GaussianSpec& spec, const std::vector<std::size_t>& sizes,
                                        const ExperimentOptions& options);

/// Class means [mean0]_d and [mean1]_d, identity covariance, per dimension.
struct DimensionTemplate {
    double mean0 = 0.0;
    double mean1 = 0.5;
    double c0 = 0.5;

    GaussianSpec at(std::size_t dim) const { return GaussianSpec::isotropic(dim, mean0, mean1, c0); }
};

/// Both estimators at fixed N over ascending dimensions, with per-dimension
/// oracle, mean estimate and empirical MSE.
ExperimentResult experiment_dimension(const DimensionTemplate& tmpl, const std::vector<std::size_t>& dims,
                                      std::size_t total, const ExperimentOptions& options);

/// |A(N + 2) - A(N)| when one extra point per class is appended to a
/// sample of N (m = n = N/2). Sizes must be even, >= 4 and ascending.
ExperimentResult experiment_assumption1(const GaussianSpec& spec, const std::vector<std::size_t>& sizes,
                                        const ExperimentOptions& options);

/// CSV with columns sweep_value,method,mean,std,mse,trials,seed. Missing
/// MSE values are left empty.
void write_results_csv(std::ostream& out, const ExperimentResult& result);

/// Minimal SVG line chart of mean +/- std per method.
void write_results_svg(std::ostream& out, const ExperimentResult& result, const std::string& x_label);

}  // namespace crossmatch
