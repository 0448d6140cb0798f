#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "crossmatch/dataset.hpp"

namespace crossmatch {

/// Dense symmetric matrix of nonnegative edge weights on a complete graph.
///
/// The optional ghost vertex has weight 0 to every other vertex and exists
/// only to make the vertex count even for perfect matching.
class DistanceMatrix {
public:
    DistanceMatrix() = default;

    /// Validates symmetry, zero diagonal, finiteness and nonnegativity.
    DistanceMatrix(std::size_t size, std::vector<double> weights);

    std::size_t size() const { return size_; }
    double operator()(std::size_t i, std::size_t j) const { return weights_[i * size_ + j]; }
    std::span<const double> row(std::size_t i) const { return {weights_.data() + i * size_, size_}; }
    std::span<const double> data() const { return weights_; }

    std::optional<std::size_t> ghost_index() const { return ghost_; }
    bool has_ghost() const { return ghost_.has_value(); }

    /// Number of vertices that stand for real sample points.
    std::size_t real_size() const { return has_ghost() ? size_ - 1 : size_; }

    double max_weight() const;

private:
    friend DistanceMatrix add_ghost_point(const DistanceMatrix& d);
    friend DistanceMatrix pairwise_distances(const LabeledDataset& ds);

    std::size_t size_ = 0;
    std::vector<double> weights_;
    std::optional<std::size_t> ghost_;
};

/// Euclidean distances between all pairs of points.
DistanceMatrix pairwise_distances(const LabeledDataset& ds);

/// Appends the ghost vertex as index size(). Throws if one already exists.
DistanceMatrix add_ghost_point(const DistanceMatrix& d);

/// Returns d unchanged when its size is even, otherwise with a ghost appended.
DistanceMatrix make_even(const DistanceMatrix& d);

}  // namespace crossmatch
