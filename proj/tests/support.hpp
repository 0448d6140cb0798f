#pragma once

// Test-only helpers and reference implementations that do not share code
// with the library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "crossmatch/dataset.hpp"
#include "crossmatch/metric.hpp"

namespace testing_support {

using crossmatch::Label;

inline crossmatch::LabeledDataset random_points(std::size_t count, std::size_t dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    std::vector<double> coords(count * dim);
    for (auto& x : coords) x = gauss(rng);
    std::vector<Label> labels(count);
    for (std::size_t i = 0; i < count; ++i) labels[i] = static_cast<Label>(i % 2);
    std::shuffle(labels.begin(), labels.end(), rng);
    return {dim, std::move(coords), std::move(labels)};
}

inline crossmatch::LabeledDataset line_points(std::vector<double> xs, std::vector<Label> labels) {
    return {1, std::move(xs), std::move(labels)};
}

// Symmetric matrix with uniform weights in [0,1).
inline crossmatch::DistanceMatrix random_weights(std::size_t size, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<double> w(size * size, 0.0);
    for (std::size_t i = 0; i < size; ++i)
        for (std::size_t j = i + 1; j < size; ++j) w[i * size + j] = w[j * size + i] = unif(rng);
    return {size, std::move(w)};
}

// Minimum perfect matching weight by recursion over partners of the lowest
// free vertex, (n-1)!! leaves.
inline double enumerate_min_matching(const crossmatch::DistanceMatrix& d) {
    const std::size_t n = d.size();
    std::vector<bool> used(n, false);
    double best = std::numeric_limits<double>::infinity();
    auto rec = [&](auto&& self, double acc) -> void {
        std::size_t first = 0;
        while (first < n && used[first]) ++first;
        if (first == n) {
            best = std::min(best, acc);
            return;
        }
        used[first] = true;
        for (std::size_t v = first + 1; v < n; ++v) {
            if (used[v]) continue;
            used[v] = true;
            self(self, acc + d(first, v));
            used[v] = false;
        }
        used[first] = false;
    };
    rec(rec, 0.0);
    return best;
}

// Kruskal with union-find.
inline double kruskal_weight(const crossmatch::DistanceMatrix& d) {
    const std::size_t n = d.size();
    struct E {
        double w;
        std::size_t u, v;
    };
    std::vector<E> edges;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) edges.push_back({d(i, j), i, j});
    std::sort(edges.begin(), edges.end(), [](const E& a, const E& b) { return a.w < b.w; });
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    double total = 0.0;
    for (const auto& e : edges) {
        const auto a = find(e.u), b = find(e.v);
        if (a == b) continue;
        parent[a] = b;
        total += e.w;
    }
    return total;
}

inline double euclid(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
    return std::sqrt(s);
}

inline bool close_rel(double a, double b, double rel) {
    return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace testing_support
