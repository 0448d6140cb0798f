#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "crossmatch/dataset.hpp"
#include "crossmatch/matching.hpp"
#include "crossmatch/metric.hpp"
#include "crossmatch/spanning.hpp"

namespace crossmatch {

enum class StatisticKind { cross_match, friedman_rafsky };

std::string_view to_string(StatisticKind kind);

struct NullMoments {
    double mean = 0.0;
    double variance = 0.0;
};

struct CrossCountReport {
    std::size_t statistic = 0;
    StatisticKind kind = StatisticKind::cross_match;
    std::size_t m = 0;
    std::size_t n = 0;
    std::optional<NullMoments> null;  // absent when N is odd or below 4
    std::optional<double> p_value;
};

/// Number of matched edges joining points with different labels. Labels
/// cover the non-ghost vertices; the ghost, if any, must be the last vertex
/// and its edge never counts.
std::size_t cross_match_statistic(const Matching& matching, std::span<const Label> labels,
                                  std::optional<std::size_t> ghost_index = std::nullopt);

/// Number of tree edges joining points with different labels.
std::size_t fr_statistic(const SpanningTree& tree, std::span<const Label> labels);

/// Exact mean and variance of the cross-match count when labels are
/// exchangeable: mn/(N-1) and 2n(n-1)m(m-1)/((N-3)(N-1)^2).
/// Requires N = m + n even and N >= 4.
NullMoments null_moments(std::size_t m, std::size_t n);

/// Cross-match counts of `trials` uniformly random relabelings (fixed m, n)
/// over a fixed matching. Trial t uses the random stream (seed, t).
std::vector<std::size_t> permutation_null_sample(const Matching& matching, std::span<const Label> labels,
                                                 std::optional<std::size_t> ghost_index, std::size_t trials,
                                                 std::uint64_t seed);

/// Left-tail Monte Carlo p-value P(A <= A_observed) with the add-one
/// correction (r + 1) / (trials + 1). Requires trials >= 100 and both classes.
double permutation_pvalue(const Matching& matching, std::span<const Label> labels,
                          std::optional<std::size_t> ghost_index, std::size_t trials, std::uint64_t seed);

/// Same, computing the optimal matching of d (ghost-augmented when odd).
double permutation_pvalue(const DistanceMatrix& d, std::span<const Label> labels, std::size_t trials,
                          std::uint64_t seed);

/// Full cross-match test on a raw sample: statistic, null moments, p-value.
CrossCountReport cross_match_test(const DistanceMatrix& d, std::span<const Label> labels, std::size_t trials,
                                  std::uint64_t seed);

}  // namespace crossmatch
