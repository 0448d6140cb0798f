#include "crossmatch/stats.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>

#include "crossmatch/error.hpp"
#include "crossmatch/parallel.hpp"

namespace crossmatch {

std::string_view to_string(StatisticKind kind) {
    return kind == StatisticKind::cross_match ? "cross-match" : "friedman-rafsky";
}

namespace {

// Matched pairs between real points; ghost edges are dropped.
std::vector<std::pair<std::size_t, std::size_t>> real_pairs(const Matching& matching, std::span<const Label> labels,
                                                            std::optional<std::size_t> ghost_index) {
    const std::size_t size = 2 * matching.edges.size();
    const std::size_t expected = labels.size() + (ghost_index ? 1 : 0);
    if (size != expected) {
        throw std::invalid_argument("label vector covers " + std::to_string(labels.size()) +
                                    " points but the matching spans " + std::to_string(size) + " vertices");
    }
    if (ghost_index && *ghost_index != labels.size()) {
        throw std::invalid_argument("ghost point must be the last vertex");
    }
    if (!is_perfect_matching(matching, size)) throw std::invalid_argument("matching is not perfect");
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    pairs.reserve(matching.edges.size());
    for (const Edge& e : matching.edges) {
        if (ghost_index && (e.u == *ghost_index || e.v == *ghost_index)) continue;
        pairs.emplace_back(e.u, e.v);
    }
    return pairs;
}

std::size_t count_cross(const std::vector<std::pair<std::size_t, std::size_t>>& pairs, std::span<const Label> labels) {
    std::size_t a = 0;
    for (const auto& [u, v] : pairs) a += labels[u] != labels[v] ? 1 : 0;
    return a;
}

}  // namespace

std::size_t cross_match_statistic(const Matching& matching, std::span<const Label> labels,
                                  std::optional<std::size_t> ghost_index) {
    return count_cross(real_pairs(matching, labels, ghost_index), labels);
}

std::size_t fr_statistic(const SpanningTree& tree, std::span<const Label> labels) {
    if (tree.edges.size() + 1 != labels.size()) {
        throw std::invalid_argument("spanning tree does not span the labelled points");
    }
    std::size_t r = 0;
    for (const Edge& e : tree.edges) {
        if (e.u >= labels.size() || e.v >= labels.size()) throw std::invalid_argument("tree edge out of range");
        r += labels[e.u] != labels[e.v] ? 1 : 0;
    }
    return r;
}

NullMoments null_moments(std::size_t m, std::size_t n) {
    const std::size_t total = m + n;
    if (total % 2 != 0) throw std::invalid_argument("null moments need an even sample size");
    if (total < 4) throw std::invalid_argument("null variance needs N >= 4");
    const double md = static_cast<double>(m);
    const double nd = static_cast<double>(n);
    const double big = static_cast<double>(total);
    NullMoments out;
    out.mean = md * nd / (big - 1.0);
    out.variance = 2.0 * nd * (nd - 1.0) * md * (md - 1.0) / ((big - 3.0) * (big - 1.0) * (big - 1.0));
    return out;
}

std::vector<std::size_t> permutation_null_sample(const Matching& matching, std::span<const Label> labels,
                                                 std::optional<std::size_t> ghost_index, std::size_t trials,
                                                 std::uint64_t seed) {
    const auto pairs = real_pairs(matching, labels, ghost_index);
    std::vector<std::size_t> sample(trials);
    constexpr std::size_t kChunk = 256;
    const std::size_t chunks = (trials + kChunk - 1) / kChunk;
    parallel_for(chunks, [&](std::size_t c) {
        std::vector<Label> shuffled(labels.begin(), labels.end());
        const std::size_t end = std::min(trials, (c + 1) * kChunk);
        for (std::size_t t = c * kChunk; t < end; ++t) {
            auto rng = make_rng(seed, 0, t);
            std::copy(labels.begin(), labels.end(), shuffled.begin());
            std::shuffle(shuffled.begin(), shuffled.end(), rng);
            sample[t] = count_cross(pairs, shuffled);
        }
    });
    return sample;
}

double permutation_pvalue(const Matching& matching, std::span<const Label> labels,
                          std::optional<std::size_t> ghost_index, std::size_t trials, std::uint64_t seed) {
    if (trials < 100) throw std::invalid_argument("permutation test needs at least 100 trials");
    require_two_classes(class_counts(labels));
    const std::size_t observed = cross_match_statistic(matching, labels, ghost_index);
    const auto sample = permutation_null_sample(matching, labels, ghost_index, trials, seed);
    const auto extreme = std::count_if(sample.begin(), sample.end(), [&](std::size_t a) { return a <= observed; });
    return static_cast<double>(extreme + 1) / static_cast<double>(trials + 1);
}

double permutation_pvalue(const DistanceMatrix& d, std::span<const Label> labels, std::size_t trials,
                          std::uint64_t seed) {
    if (labels.size() != d.real_size()) throw std::invalid_argument("label count does not match distance matrix");
    if (trials < 100) throw std::invalid_argument("permutation test needs at least 100 trials");
    require_two_classes(class_counts(labels));
    const DistanceMatrix even = make_even(d);
    const Matching matching = min_weight_perfect_matching(even);
    return permutation_pvalue(matching, labels, even.ghost_index(), trials, seed);
}

CrossCountReport cross_match_test(const DistanceMatrix& d, std::span<const Label> labels, std::size_t trials,
                                  std::uint64_t seed) {
    if (labels.size() != d.real_size()) throw std::invalid_argument("label count does not match distance matrix");
    if (trials < 100) throw std::invalid_argument("permutation test needs at least 100 trials");
    const auto counts = class_counts(labels);
    require_two_classes(counts);
    const DistanceMatrix even = make_even(d);
    const Matching matching = min_weight_perfect_matching(even);

    CrossCountReport report;
    report.kind = StatisticKind::cross_match;
    report.statistic = cross_match_statistic(matching, labels, even.ghost_index());
    report.m = counts.m;
    report.n = counts.n;
    if ((counts.m + counts.n) % 2 == 0 && counts.m + counts.n >= 4) report.null = null_moments(counts.m, counts.n);
    report.p_value = permutation_pvalue(matching, labels, even.ghost_index(), trials, seed);
    return report;
}

}  // namespace crossmatch
