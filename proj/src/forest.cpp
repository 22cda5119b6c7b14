#include "senc/forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "senc/rng.hpp"

namespace senc {

namespace {

constexpr std::uint64_t kTreeSalt = 0x74726565ULL;

double gini(std::int64_t minority, std::int64_t total) {
    if (total == 0) return 0;
    const double p = static_cast<double>(minority) / static_cast<double>(total);
    return 2.0 * p * (1.0 - p);
}

struct SplitCandidate {
    bool found = false;
    int feature = -1;
    double threshold = 0;
    double weighted_decrease = 0;  // node_share * impurity decrease
    double decrease = 0;
};

class TreeBuilder {
public:
    TreeBuilder(const Eigen::Ref<const Eigen::MatrixXd>& X, const std::vector<int>& y,
                const ForestParams& params, Eigen::Index n_total, Rng rng,
                Eigen::VectorXd& importance_accum)
        : X_(X), y_(y), params_(params), n_total_(n_total), rng_(std::move(rng)),
          importances_(importance_accum) {
        feature_pool_.resize(static_cast<std::size_t>(X.cols()));
        std::iota(feature_pool_.begin(), feature_pool_.end(), 0);
        mtry_ = params.features_per_split > 0
                    ? std::min<Eigen::Index>(params.features_per_split, X.cols())
                    : static_cast<Eigen::Index>(
                          std::ceil(std::sqrt(static_cast<double>(X.cols()))));
    }

    DecisionTree build(std::vector<Eigen::Index> sample) {
        tree_.nodes.clear();
        grow(std::move(sample), 0);
        return std::move(tree_);
    }

private:
    std::int32_t grow(std::vector<Eigen::Index> sample, int depth) {
        const auto node_id = static_cast<std::int32_t>(tree_.nodes.size());
        tree_.nodes.emplace_back();

        const auto n = static_cast<std::int64_t>(sample.size());
        std::int64_t minority = 0;
        for (const Eigen::Index i : sample) minority += y_[static_cast<std::size_t>(i)];

        auto& node = tree_.nodes[static_cast<std::size_t>(node_id)];
        node.samples = n;
        node.minority_fraction = static_cast<double>(minority) / static_cast<double>(n);

        const bool depth_allows = params_.max_depth <= 0 || depth < params_.max_depth;
        if (!depth_allows || minority == 0 || minority == n ||
            n < 2 * params_.min_samples_leaf) {
            return node_id;
        }

        const SplitCandidate split = best_split(sample, minority);
        if (!split.found) return node_id;

        importances_(split.feature) +=
            static_cast<double>(n) / static_cast<double>(n_total_) * split.decrease;

        std::vector<Eigen::Index> left, right;
        left.reserve(sample.size());
        right.reserve(sample.size());
        for (const Eigen::Index i : sample)
            (X_(i, split.feature) <= split.threshold ? left : right).push_back(i);
        sample.clear();
        sample.shrink_to_fit();

        // Fill split fields after growing children: `node` may dangle once
        // the node vector reallocates.
        const std::int32_t left_id = grow(std::move(left), depth + 1);
        const std::int32_t right_id = grow(std::move(right), depth + 1);
        auto& filled = tree_.nodes[static_cast<std::size_t>(node_id)];
        filled.feature = split.feature;
        filled.threshold = split.threshold;
        filled.left = left_id;
        filled.right = right_id;
        return node_id;
    }

    SplitCandidate best_split(const std::vector<Eigen::Index>& sample, std::int64_t minority) {
        const auto n = static_cast<std::int64_t>(sample.size());
        const double node_impurity = gini(minority, n);

        // mtry features without replacement; with mtry == p the pool is
        // used in index order so column symmetry is preserved.
        if (mtry_ < static_cast<Eigen::Index>(feature_pool_.size())) {
            for (Eigen::Index i = 0; i < mtry_; ++i) {
                const auto j = static_cast<std::size_t>(
                    rng_.below(feature_pool_.size() - static_cast<std::size_t>(i)) +
                    static_cast<std::uint64_t>(i));
                std::swap(feature_pool_[static_cast<std::size_t>(i)], feature_pool_[j]);
            }
        }

        SplitCandidate best;
        std::vector<std::pair<double, int>> values(sample.size());
        for (Eigen::Index fi = 0; fi < mtry_; ++fi) {
            const int f = feature_pool_[static_cast<std::size_t>(fi)];
            for (std::size_t i = 0; i < sample.size(); ++i) {
                const Eigen::Index row = sample[i];
                values[i] = {X_(row, f), y_[static_cast<std::size_t>(row)]};
            }
            std::sort(values.begin(), values.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });

            std::int64_t left_n = 0, left_minority = 0;
            for (std::size_t i = 0; i + 1 < values.size(); ++i) {
                ++left_n;
                left_minority += values[i].second;
                if (values[i].first == values[i + 1].first) continue;
                const std::int64_t right_n = n - left_n;
                if (left_n < params_.min_samples_leaf || right_n < params_.min_samples_leaf)
                    continue;
                const double threshold = 0.5 * (values[i].first + values[i + 1].first);
                if (!(threshold > values[i].first) || !(threshold < values[i + 1].first))
                    continue;  // adjacent floats; midpoint not strictly between
                const double decrease =
                    node_impurity -
                    (static_cast<double>(left_n) * gini(left_minority, left_n) +
                     static_cast<double>(right_n) * gini(minority - left_minority, right_n)) /
                        static_cast<double>(n);
                if (decrease > 1e-12 && (!best.found || decrease > best.decrease)) {
                    best.found = true;
                    best.feature = f;
                    best.threshold = threshold;
                    best.decrease = decrease;
                }
            }
        }
        return best;
    }

    const Eigen::Ref<const Eigen::MatrixXd>& X_;
    const std::vector<int>& y_;
    const ForestParams& params_;
    Eigen::Index n_total_;
    Rng rng_;
    Eigen::VectorXd& importances_;
    std::vector<int> feature_pool_;
    Eigen::Index mtry_ = 0;
    DecisionTree tree_;
};

}  // namespace

TrainedForest train_forest(const Eigen::Ref<const Eigen::MatrixXd>& X, const std::vector<int>& y,
                           const ForestParams& params) {
    const Eigen::Index n = X.rows();
    if (n == 0 || X.cols() == 0) throw Error("train_forest: empty feature matrix");
    if (static_cast<Eigen::Index>(y.size()) != n)
        throw Error("train_forest: label count does not match row count");
    if (!X.allFinite()) throw Error("train_forest: features must be finite");
    if (params.n_trees < 1) throw Error("train_forest: n_trees must be >= 1");
    if (params.min_samples_leaf < 1) throw Error("train_forest: min_samples_leaf must be >= 1");
    std::int64_t minority = 0;
    for (const int v : y) {
        if (v != 0 && v != 1) throw Error("train_forest: labels must be 0 or 1");
        minority += v;
    }
    if (minority == 0 || minority == n)
        throw Error("train_forest: training data contains a single class");

    TrainedForest forest;
    forest.n_features = X.cols();
    forest.trees.resize(static_cast<std::size_t>(params.n_trees));
    Eigen::MatrixXd per_tree_importance =
        Eigen::MatrixXd::Zero(X.cols(), params.n_trees);

    for (int tree_i = 0; tree_i < params.n_trees; ++tree_i) {
        Rng rng = Rng::substream(params.seed, kTreeSalt, static_cast<std::uint64_t>(tree_i));
        std::vector<Eigen::Index> sample(static_cast<std::size_t>(n));
        if (params.bootstrap) {
            for (auto& idx : sample)
                idx = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(n)));
        } else {
            std::iota(sample.begin(), sample.end(), Eigen::Index{0});
        }
        Eigen::VectorXd accum = Eigen::VectorXd::Zero(X.cols());
        TreeBuilder builder(X, y, params, n, std::move(rng), accum);
        forest.trees[static_cast<std::size_t>(tree_i)] = builder.build(std::move(sample));
        const double total = accum.sum();
        if (total > 0) per_tree_importance.col(tree_i) = accum / total;
    }

    Eigen::VectorXd mean = per_tree_importance.rowwise().mean();
    const double total = mean.sum();
    forest.importances = total > 0 ? Eigen::VectorXd(mean / total)
                                   : Eigen::VectorXd(Eigen::VectorXd::Zero(X.cols()));
    return forest;
}

Eigen::VectorXd predict_proba(const TrainedForest& forest,
                              const Eigen::Ref<const Eigen::MatrixXd>& X) {
    if (X.cols() != forest.n_features)
        throw Error("predict_proba: expected " + std::to_string(forest.n_features) +
                    " feature columns, got " + std::to_string(X.cols()));
    Eigen::VectorXd out = Eigen::VectorXd::Zero(X.rows());
    for (const auto& tree : forest.trees)
        for (Eigen::Index i = 0; i < X.rows(); ++i) out(i) += tree.predict(X.row(i));
    out /= static_cast<double>(forest.trees.size());
    return out;
}

nlohmann::ordered_json forest_to_json(const TrainedForest& forest) {
    nlohmann::ordered_json doc;
    doc["schema_version"] = 1;
    doc["n_features"] = forest.n_features;
    auto importances = nlohmann::ordered_json::array();
    for (Eigen::Index i = 0; i < forest.importances.size(); ++i)
        importances.push_back(forest.importances(i));
    doc["feature_importances"] = std::move(importances);
    auto trees = nlohmann::ordered_json::array();
    for (const auto& tree : forest.trees) {
        auto nodes = nlohmann::ordered_json::array();
        for (const auto& node : tree.nodes) {
            if (node.feature < 0)
                nodes.push_back({{"samples", node.samples},
                                 {"minority_fraction", node.minority_fraction}});
            else
                nodes.push_back({{"samples", node.samples},
                                 {"feature", node.feature},
                                 {"threshold", node.threshold},
                                 {"left", node.left},
                                 {"right", node.right}});
        }
        trees.push_back(std::move(nodes));
    }
    doc["trees"] = std::move(trees);
    return doc;
}

}  // namespace senc
