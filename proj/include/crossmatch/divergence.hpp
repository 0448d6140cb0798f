#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "crossmatch/dataset.hpp"
#include "crossmatch/stats.hpp"

namespace crossmatch {

/// Class priors c0 = P(y=0), c1 = P(y=1).
struct Priors {
    double c0 = 0.5;
    double c1 = 0.5;

    /// Throws DataError unless both are in (0,1) and sum to 1.
    void validate() const;
    static Priors from_c0(double c0) { return {c0, 1.0 - c0}; }
};

struct BayesBounds {
    double lower = 0.5;
    double upper = 0.5;
};

/// Henze-Penrose divergence estimate derived from a graph statistic, with
/// the affinity u_c and the Bayes error bounds it implies.
struct DivergenceReport {
    double estimate_raw = 0.0;  // may dip below 0 in finite samples
    double estimate = 0.0;      // clamped to [0, 1]
    std::size_t statistic = 0;
    StatisticKind kind = StatisticKind::cross_match;
    std::size_t m = 0;
    std::size_t n = 0;
    Priors priors;  // empirical n/N, m/N unless overridden
    double u_c = 0.0;
    double bayes_lower = 0.5;
    double bayes_upper = 0.5;
};

/// 1 - (m + n) A / (m n), from the cross-match count A.
DivergenceReport hp_estimate_crossmatch(std::size_t a, std::size_t m, std::size_t n,
                                        std::optional<Priors> priors = std::nullopt);

/// 1 - (m + n) R / (2 m n), from the Friedman-Rafsky count R.
DivergenceReport hp_estimate_fr(std::size_t r, std::size_t m, std::size_t n,
                                std::optional<Priors> priors = std::nullopt);

/// u_c = 4 c0 c1 D + (c0 - c1)^2.
double affinity_from_divergence(double divergence, const Priors& priors);

/// (1 - sqrt(u)) / 2 <= Bayes error <= (1 - u) / 2, for u in [0, 1].
BayesBounds bayes_bounds(double u);

/// Exact two-class model on a finite support of bins.
class DiscretePair {
public:
    DiscretePair(double c0, double c1, std::vector<double> p0, std::vector<double> p1);

    double c0() const { return c0_; }
    double c1() const { return c1_; }
    const std::vector<double>& p0() const { return p0_; }
    const std::vector<double>& p1() const { return p1_; }
    std::size_t bins() const { return p0_.size(); }

    /// Same model with the class roles exchanged.
    DiscretePair swapped() const { return DiscretePair(c1_, c0_, p1_, p0_); }

private:
    double c0_;
    double c1_;
    std::vector<double> p0_;
    std::vector<double> p1_;
};

/// Sum over bins of min(c0 p0, c1 p1).
double discrete_bayes_error(const DiscretePair& dp);

/// The same error accumulated region-wise: c1 p1 over the bins where class 0
/// is chosen (c0 p0 >= c1 p1) plus c0 p0 over the rest.
double discrete_bayes_error_by_regions(const DiscretePair& dp);

/// H_c = 1 - 4 c0 c1 sum p0 p1 / (c0 p0 + c1 p1). Empty bins contribute 0.
double discrete_affinity(const DiscretePair& dp);

/// D_c = [sum (c0 p0 - c1 p1)^2 / (c0 p0 + c1 p1) - (c0 - c1)^2] / (4 c0 c1).
double discrete_hp_divergence(const DiscretePair& dp);

/// Discrete histogram rule: each bin predicts its majority training label.
/// Unseen bins take the overall majority label; ties go to label 0.
class HistogramRule {
public:
    using Bin = std::size_t;

    static HistogramRule fit(std::span<const std::pair<Bin, Label>> train);

    Label classify(Bin bin) const;
    Label fallback() const { return fallback_; }

    /// Probability of misclassification under the model dp, whose bins are
    /// indexed 0 .. dp.bins() - 1.
    double expected_error(const DiscretePair& dp) const;

private:
    std::map<Bin, Label> table_;
    Label fallback_ = 0;
};

}  // namespace crossmatch
