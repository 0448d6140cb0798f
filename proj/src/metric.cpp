#include "crossmatch/metric.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "crossmatch/error.hpp"

namespace crossmatch {

namespace {

// Only the Euclidean metric is exposed; other point metrics plug in here.
using PointMetric = double (*)(std::span<const double>, std::span<const double>);

double euclidean(std::span<const double> a, std::span<const double> b) {
    double ss = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double t = a[k] - b[k];
        ss += t * t;
    }
    return std::sqrt(ss);
}

std::vector<double> dense_distances(const LabeledDataset& ds, PointMetric metric) {
    const std::size_t n = ds.size();
    std::vector<double> w(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto pi = ds.point(i);
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dij = metric(pi, ds.point(j));
            w[i * n + j] = dij;
            w[j * n + i] = dij;
        }
    }
    return w;
}

}  // namespace

DistanceMatrix::DistanceMatrix(std::size_t size, std::vector<double> weights)
    : size_(size), weights_(std::move(weights)) {
    if (weights_.size() != size_ * size_) {
        throw std::invalid_argument("distance matrix needs size*size weights");
    }
    for (std::size_t i = 0; i < size_; ++i) {
        if (weights_[i * size_ + i] != 0.0) {
            throw DataError("distance matrix diagonal entry " + std::to_string(i) + " is not zero");
        }
        for (std::size_t j = i + 1; j < size_; ++j) {
            const double a = weights_[i * size_ + j];
            if (!std::isfinite(a) || a < 0.0) {
                throw DataError("distance matrix entry (" + std::to_string(i) + "," + std::to_string(j) +
                                ") is negative or non-finite");
            }
            if (a != weights_[j * size_ + i]) {
                throw DataError("distance matrix is not symmetric at (" + std::to_string(i) + "," +
                                std::to_string(j) + ")");
            }
        }
    }
}

double DistanceMatrix::max_weight() const {
    return weights_.empty() ? 0.0 : *std::max_element(weights_.begin(), weights_.end());
}

DistanceMatrix pairwise_distances(const LabeledDataset& ds) {
    if (ds.size() < 2) throw std::invalid_argument("pairwise distances need at least 2 points");
    if (ds.dim() < 1) throw std::invalid_argument("pairwise distances need dimension >= 1");
    for (double x : ds.coords()) {
        if (!std::isfinite(x)) throw DataError("non-finite coordinate");
    }
    DistanceMatrix d;
    d.size_ = ds.size();
    d.weights_ = dense_distances(ds, euclidean);
    return d;
}

DistanceMatrix add_ghost_point(const DistanceMatrix& d) {
    if (d.has_ghost()) throw std::invalid_argument("distance matrix already has a ghost point");
    const std::size_t old = d.size();
    const std::size_t n = old + 1;
    DistanceMatrix out;
    out.size_ = n;
    out.weights_.assign(n * n, 0.0);
    for (std::size_t i = 0; i < old; ++i) {
        std::copy_n(d.weights_.begin() + static_cast<std::ptrdiff_t>(i * old), old,
                    out.weights_.begin() + static_cast<std::ptrdiff_t>(i * n));
    }
    out.ghost_ = old;
    return out;
}

DistanceMatrix make_even(const DistanceMatrix& d) {
    return d.size() % 2 == 0 ? d : add_ghost_point(d);
}

}  // namespace crossmatch
