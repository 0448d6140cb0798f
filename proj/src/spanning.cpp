#include "crossmatch/spanning.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace crossmatch {

SpanningTree minimum_spanning_tree(const DistanceMatrix& d) {
    if (d.has_ghost()) throw std::invalid_argument("spanning tree is built on the raw sample; remove the ghost point");
    const std::size_t n = d.size();
    if (n < 2) throw std::invalid_argument("spanning tree needs at least 2 vertices");

    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> key(n, kInf);
    std::vector<std::size_t> link(n, 0);
    std::vector<char> in_tree(n, 0);

    SpanningTree tree;
    tree.edges.reserve(n - 1);
    std::size_t current = 0;
    in_tree[0] = 1;
    for (std::size_t step = 1; step < n; ++step) {
        const auto row = d.row(current);
        std::size_t next = n;
        double next_key = kInf;
        for (std::size_t v = 0; v < n; ++v) {
            if (in_tree[v]) continue;
            if (row[v] < key[v]) {
                key[v] = row[v];
                link[v] = current;
            }
            // strict comparison keeps the smallest index on ties
            if (next == n || key[v] < next_key) {
                next = v;
                next_key = key[v];
            }
        }
        in_tree[next] = 1;
        tree.edges.push_back({std::min(next, link[next]), std::max(next, link[next])});
        tree.total_weight += next_key;
        current = next;
    }
    std::sort(tree.edges.begin(), tree.edges.end());
    return tree;
}

bool is_spanning_tree(const SpanningTree& t, std::size_t size) {
    if (size == 0 || t.edges.size() + 1 != size) return false;
    std::vector<std::size_t> parent(size);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const Edge& e : t.edges) {
        if (e.u >= size || e.v >= size) return false;
        const std::size_t a = find(e.u);
        const std::size_t b = find(e.v);
        if (a == b) return false;
        parent[a] = b;
    }
    return true;
}

}  // namespace crossmatch
