#pragma once

#include <cstddef>
#include <optional>

#include "crossmatch/dataset.hpp"
#include "crossmatch/divergence.hpp"
#include "crossmatch/metric.hpp"

namespace crossmatch {

/// Cross-match count of a labelled sample: optimal matching on the
/// Euclidean distances, with a ghost point when N is odd.
std::size_t cross_match_count(const DistanceMatrix& d, std::span<const Label> labels);
std::size_t cross_match_count(const LabeledDataset& ds);

/// Friedman-Rafsky count on the Euclidean MST of the raw sample.
std::size_t fr_count(const DistanceMatrix& d, std::span<const Label> labels);

/// End-to-end divergence estimates for a labelled sample.
DivergenceReport estimate_crossmatch(const LabeledDataset& ds, std::optional<Priors> priors = std::nullopt);
DivergenceReport estimate_fr(const LabeledDataset& ds, std::optional<Priors> priors = std::nullopt);

struct EstimatePair {
    DivergenceReport owm;
    DivergenceReport fr;
};

/// Both estimators sharing one distance matrix.
EstimatePair estimate_both(const LabeledDataset& ds, std::optional<Priors> priors = std::nullopt);

}  // namespace crossmatch
