#pragma once

#include <vector>

#include "crossmatch/matching.hpp"
#include "crossmatch/metric.hpp"

namespace crossmatch {

struct SpanningTree {
    std::vector<Edge> edges;  // size - 1 edges, sorted
    double total_weight = 0.0;
};

/// Dense Prim construction in O(N^2) time. Among equally cheap candidates
/// the smallest vertex index joins the tree first. Ghost vertices are
/// rejected: the Friedman-Rafsky tree spans the raw sample only.
SpanningTree minimum_spanning_tree(const DistanceMatrix& d);

/// Connected and acyclic on `size` vertices with size - 1 edges.
bool is_spanning_tree(const SpanningTree& t, std::size_t size);

}  // namespace crossmatch
