#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include <nlohmann/json.hpp>

#include "senc/error.hpp"

namespace senc {

struct ForestParams {
    int n_trees = 100;
    int max_depth = 0;          // 0 = unlimited
    int min_samples_leaf = 1;
    int features_per_split = 0;  // 0 = ceil(sqrt(p))
    bool bootstrap = true;
    std::uint64_t seed = 0;
};

// Binary split node; feature < 0 marks a leaf.
struct TreeNode {
    int feature = -1;
    double threshold = 0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    double minority_fraction = 0;
    std::int64_t samples = 0;
};

struct DecisionTree {
    std::vector<TreeNode> nodes;

    double predict(const Eigen::Ref<const Eigen::RowVectorXd>& row) const {
        std::int32_t node = 0;
        while (nodes[static_cast<std::size_t>(node)].feature >= 0) {
            const auto& nd = nodes[static_cast<std::size_t>(node)];
            node = row(nd.feature) <= nd.threshold ? nd.left : nd.right;
        }
        return nodes[static_cast<std::size_t>(node)].minority_fraction;
    }
};

struct TrainedForest {
    std::vector<DecisionTree> trees;
    Eigen::VectorXd importances;  // normalized mean decrease in Gini impurity
    Eigen::Index n_features = 0;
};

// Gini-impurity random forest on bootstrap samples, deterministic under
// the seed via per-tree substreams. y holds 1 for minority rows.
TrainedForest train_forest(const Eigen::Ref<const Eigen::MatrixXd>& X, const std::vector<int>& y,
                           const ForestParams& params);

// Mean over trees of the leaf minority-class proportion, in [0, 1].
Eigen::VectorXd predict_proba(const TrainedForest& forest,
                              const Eigen::Ref<const Eigen::MatrixXd>& X);

// Nonnegative, sums to 1 (all zero when no split was ever made).
inline const Eigen::VectorXd& feature_importances(const TrainedForest& forest) {
    return forest.importances;
}

// Tree structures for inspection; not a stability-guaranteed format.
nlohmann::ordered_json forest_to_json(const TrainedForest& forest);

}  // namespace senc
