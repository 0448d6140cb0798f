#include "crossmatch/estimate.hpp"

#include <stdexcept>

#include "crossmatch/matching.hpp"
#include "crossmatch/spanning.hpp"
#include "crossmatch/stats.hpp"

namespace crossmatch {

std::size_t cross_match_count(const DistanceMatrix& d, std::span<const Label> labels) {
    if (labels.size() != d.real_size()) throw std::invalid_argument("label count does not match distance matrix");
    if (d.size() % 2 == 0) return cross_match_statistic(min_weight_perfect_matching(d), labels, d.ghost_index());
    const DistanceMatrix even = add_ghost_point(d);
    return cross_match_statistic(min_weight_perfect_matching(even), labels, even.ghost_index());
}

std::size_t cross_match_count(const LabeledDataset& ds) {
    return cross_match_count(pairwise_distances(ds), ds.labels());
}

std::size_t fr_count(const DistanceMatrix& d, std::span<const Label> labels) {
    return fr_statistic(minimum_spanning_tree(d), labels);
}

DivergenceReport estimate_crossmatch(const LabeledDataset& ds, std::optional<Priors> priors) {
    const auto counts = class_counts(ds);
    require_two_classes(counts);
    return hp_estimate_crossmatch(cross_match_count(ds), counts.m, counts.n, priors);
}

DivergenceReport estimate_fr(const LabeledDataset& ds, std::optional<Priors> priors) {
    const auto counts = class_counts(ds);
    require_two_classes(counts);
    return hp_estimate_fr(fr_count(pairwise_distances(ds), ds.labels()), counts.m, counts.n, priors);
}

EstimatePair estimate_both(const LabeledDataset& ds, std::optional<Priors> priors) {
    const auto counts = class_counts(ds);
    require_two_classes(counts);
    const DistanceMatrix d = pairwise_distances(ds);
    return {hp_estimate_crossmatch(cross_match_count(d, ds.labels()), counts.m, counts.n, priors),
            hp_estimate_fr(fr_count(d, ds.labels()), counts.m, counts.n, priors)};
}

}  // namespace crossmatch
