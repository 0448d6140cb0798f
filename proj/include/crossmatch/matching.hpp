#pragma once

#include <cstddef>
#include <vector>

#include "crossmatch/metric.hpp"

namespace crossmatch {

/// Undirected edge with u < v.
struct Edge {
    std::size_t u = 0;
    std::size_t v = 0;

    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// A perfect matching: size/2 disjoint edges covering every vertex.
struct Matching {
    std::vector<Edge> edges;  // sorted lexicographically
    double total_weight = 0.0;

    /// mate[v] for every vertex of a graph with `size` vertices.
    std::vector<std::size_t> mates(std::size_t size) const;
};

/// Exact minimum-weight perfect matching on the complete graph described by d.
///
/// Primal-dual blossom method in O(N^3) time and O(N^2) memory. Weights are
/// mapped onto a fixed-point integer grid (2^-40 of the largest weight) so
/// that every dual update and tightness test is exact; the reported
/// total_weight is summed from the original weights.
///
/// Requires an even size >= 2; add a ghost point first for odd samples.
Matching min_weight_perfect_matching(const DistanceMatrix& d);

/// Exhaustive minimum over all (size-1)!! perfect matchings, size <= 14.
/// Among equal-weight optima the lexicographically smallest sorted edge list
/// is returned.
Matching brute_force_matching(const DistanceMatrix& d);

/// True when m's edges are disjoint and cover all `size` vertices.
bool is_perfect_matching(const Matching& m, std::size_t size);

/// Sum of d over m's edges.
double matching_weight(const Matching& m, const DistanceMatrix& d);

}  // namespace crossmatch
