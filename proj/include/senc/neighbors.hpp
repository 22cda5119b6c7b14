#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <utility>
#include <vector>

#include "senc/error.hpp"

namespace senc {

template <typename DerivedA, typename DerivedB>
double euclidean_distance(const Eigen::MatrixBase<DerivedA>& a,
                          const Eigen::MatrixBase<DerivedB>& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw Error("euclidean_distance: vector lengths differ");
    return std::sqrt((a.derived() - b.derived()).squaredNorm());
}

// Mixed-row distance with a fixed penalty per differing nominal feature:
// sqrt(sum (a_i - b_i)^2 + penalty^2 * #differing nominal features).
double nc_distance(const Eigen::Ref<const Eigen::RowVectorXd>& a_cont,
                   const Eigen::Ref<const Eigen::RowVectorXi>& a_nom,
                   const Eigen::Ref<const Eigen::RowVectorXd>& b_cont,
                   const Eigen::Ref<const Eigen::RowVectorXi>& b_nom, double penalty);

enum class MetricKind { euclidean, nc };

struct DistanceMetric {
    MetricKind kind = MetricKind::euclidean;
    double penalty = 0;  // nc only; must be > 0
};

// Indices of the k nearest points to `query` (query excluded), ascending
// by distance, ties broken by ascending index. dist(i, j) supplies the
// metric. Requires 1 <= k <= n - 1.
template <typename DistFn>
std::vector<Eigen::Index> knn_among(Eigen::Index n, Eigen::Index query, Eigen::Index k,
                                    DistFn&& dist) {
    if (k < 1 || k > n - 1)
        throw Error("k nearest neighbors: k must satisfy 1 <= k <= " + std::to_string(n - 1) +
                    " (reduce k or supply more minority samples)");
    std::vector<std::pair<double, Eigen::Index>> order;
    order.reserve(static_cast<std::size_t>(n - 1));
    for (Eigen::Index i = 0; i < n; ++i)
        if (i != query) order.emplace_back(dist(query, i), i);
    std::sort(order.begin(), order.end());
    std::vector<Eigen::Index> out(static_cast<std::size_t>(k));
    for (Eigen::Index i = 0; i < k; ++i) out[static_cast<std::size_t>(i)] = order[static_cast<std::size_t>(i)].second;
    return out;
}

// Euclidean k-NN over the rows of `points` (the minority rows).
std::vector<Eigen::Index> knn_minority(const Eigen::Ref<const Eigen::MatrixXd>& points,
                                       Eigen::Index query, Eigen::Index k);

// NC k-NN over mixed minority rows.
std::vector<Eigen::Index> knn_minority(const Eigen::Ref<const Eigen::MatrixXd>& cont,
                                       const Eigen::Ref<const Eigen::MatrixXi>& nom,
                                       double penalty, Eigen::Index query, Eigen::Index k);

}  // namespace senc
