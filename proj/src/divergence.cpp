#include "crossmatch/divergence.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "crossmatch/error.hpp"

namespace crossmatch {

namespace {

constexpr double kSumTolerance = 1e-12;

DivergenceReport finish(double raw, std::size_t statistic, StatisticKind kind, std::size_t m, std::size_t n,
                        std::optional<Priors> priors) {
    DivergenceReport r;
    r.estimate_raw = raw;
    r.estimate = std::clamp(raw, 0.0, 1.0);
    r.statistic = statistic;
    r.kind = kind;
    r.m = m;
    r.n = n;
    const double total = static_cast<double>(m + n);
    r.priors = priors.value_or(Priors{static_cast<double>(n) / total, static_cast<double>(m) / total});
    r.priors.validate();
    r.u_c = affinity_from_divergence(r.estimate, r.priors);
    const BayesBounds b = bayes_bounds(r.u_c);
    r.bayes_lower = b.lower;
    r.bayes_upper = b.upper;
    return r;
}

void require_classes(std::size_t m, std::size_t n) {
    if (m == 0 || n == 0) {
        throw DataError("divergence estimate needs both classes (m=" + std::to_string(m) +
                        ", n=" + std::to_string(n) + ")");
    }
}

}  // namespace

void Priors::validate() const {
    if (!(c0 > 0.0 && c0 < 1.0 && c1 > 0.0 && c1 < 1.0) || std::abs(c0 + c1 - 1.0) > kSumTolerance) {
        throw DataError("priors must lie in (0,1) and sum to 1 (c0=" + std::to_string(c0) +
                        ", c1=" + std::to_string(c1) + ")");
    }
}

DivergenceReport hp_estimate_crossmatch(std::size_t a, std::size_t m, std::size_t n, std::optional<Priors> priors) {
    require_classes(m, n);
    const double md = static_cast<double>(m);
    const double nd = static_cast<double>(n);
    const double raw = 1.0 - (md + nd) * static_cast<double>(a) / (md * nd);
    return finish(raw, a, StatisticKind::cross_match, m, n, priors);
}

DivergenceReport hp_estimate_fr(std::size_t r, std::size_t m, std::size_t n, std::optional<Priors> priors) {
    require_classes(m, n);
    const double md = static_cast<double>(m);
    const double nd = static_cast<double>(n);
    const double raw = 1.0 - (md + nd) * static_cast<double>(r) / (2.0 * md * nd);
    return finish(raw, r, StatisticKind::friedman_rafsky, m, n, priors);
}

double affinity_from_divergence(double divergence, const Priors& priors) {
    const double gap = priors.c0 - priors.c1;
    return std::clamp(4.0 * priors.c0 * priors.c1 * divergence + gap * gap, 0.0, 1.0);
}

BayesBounds bayes_bounds(double u) {
    if (!(u >= 0.0 && u <= 1.0)) throw std::invalid_argument("affinity u must lie in [0,1]");
    return {0.5 * (1.0 - std::sqrt(u)), 0.5 * (1.0 - u)};
}

DiscretePair::DiscretePair(double c0, double c1, std::vector<double> p0, std::vector<double> p1)
    : c0_(c0), c1_(c1), p0_(std::move(p0)), p1_(std::move(p1)) {
    Priors{c0_, c1_}.validate();
    if (p0_.empty() || p0_.size() != p1_.size()) {
        throw DataError("p0 and p1 must be nonempty and of equal length");
    }
    for (const auto* p : {&p0_, &p1_}) {
        double sum = 0.0;
        for (double x : *p) {
            if (!std::isfinite(x) || x < 0.0) throw DataError("probabilities must be finite and nonnegative");
            sum += x;
        }
        if (std::abs(sum - 1.0) > kSumTolerance) {
            throw DataError("probability vector sums to " + std::to_string(sum) + ", not 1");
        }
    }
}

double discrete_bayes_error(const DiscretePair& dp) {
    double eps = 0.0;
    for (std::size_t i = 0; i < dp.bins(); ++i) eps += std::min(dp.c0() * dp.p0()[i], dp.c1() * dp.p1()[i]);
    return eps;
}

double discrete_bayes_error_by_regions(const DiscretePair& dp) {
    double chosen_zero = 0.0;
    double chosen_one = 0.0;
    for (std::size_t i = 0; i < dp.bins(); ++i) {
        const double a = dp.c0() * dp.p0()[i];
        const double b = dp.c1() * dp.p1()[i];
        if (a >= b) {
            chosen_zero += b;
        } else {
            chosen_one += a;
        }
    }
    return chosen_zero + chosen_one;
}

double discrete_affinity(const DiscretePair& dp) {
    double acc = 0.0;
    for (std::size_t i = 0; i < dp.bins(); ++i) {
        const double mix = dp.c0() * dp.p0()[i] + dp.c1() * dp.p1()[i];
        if (mix > 0.0) acc += dp.p0()[i] * dp.p1()[i] / mix;
    }
    return 1.0 - 4.0 * dp.c0() * dp.c1() * acc;
}

double discrete_hp_divergence(const DiscretePair& dp) {
    double acc = 0.0;
    for (std::size_t i = 0; i < dp.bins(); ++i) {
        const double a = dp.c0() * dp.p0()[i];
        const double b = dp.c1() * dp.p1()[i];
        if (a + b > 0.0) acc += (a - b) * (a - b) / (a + b);
    }
    const double gap = dp.c0() - dp.c1();
    return (acc - gap * gap) / (4.0 * dp.c0() * dp.c1());
}

HistogramRule HistogramRule::fit(std::span<const std::pair<Bin, Label>> train) {
    if (train.empty()) throw std::invalid_argument("histogram rule needs at least one training pair");
    std::map<Bin, std::pair<std::size_t, std::size_t>> votes;
    std::size_t ones = 0;
    for (const auto& [bin, label] : train) {
        if (label > 1) throw DataError("training label outside {0,1}");
        auto& v = votes[bin];
        (label == 1 ? v.second : v.first) += 1;
        ones += label;
    }
    HistogramRule rule;
    for (const auto& [bin, v] : votes) rule.table_[bin] = v.second > v.first ? 1 : 0;
    rule.fallback_ = ones > train.size() - ones ? 1 : 0;
    return rule;
}

Label HistogramRule::classify(Bin bin) const {
    const auto it = table_.find(bin);
    return it == table_.end() ? fallback_ : it->second;
}

double HistogramRule::expected_error(const DiscretePair& dp) const {
    double err = 0.0;
    for (std::size_t i = 0; i < dp.bins(); ++i) {
        err += classify(i) == 0 ? dp.c1() * dp.p1()[i] : dp.c0() * dp.p0()[i];
    }
    return err;
}

}  // namespace crossmatch
