#include "senc/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

namespace senc {

std::int64_t ScoredPredictions::positives() const {
    return std::accumulate(labels.begin(), labels.end(), std::int64_t{0});
}

std::int64_t ScoredPredictions::negatives() const {
    return static_cast<std::int64_t>(labels.size()) - positives();
}

void ScoredPredictions::validate() const {
    if (scores.size() != static_cast<Eigen::Index>(labels.size()))
        throw Error("scored predictions: score and label counts differ");
    if (!scores.allFinite()) throw Error("scored predictions: scores must be finite");
    for (const int v : labels)
        if (v != 0 && v != 1) throw Error("scored predictions: labels must be 0 or 1");
}

double f_beta_score(double precision, double recall, double beta) {
    if (!(beta > 0)) throw Error("f_beta_score: beta must be positive");
    const double denom = beta * beta * precision + recall;
    if (denom == 0) return 0;
    return (1.0 + beta * beta) * precision * recall / denom;
}

ThresholdMetrics precision_recall_fbeta(const ScoredPredictions& preds, double threshold,
                                        double beta) {
    preds.validate();
    if (!(threshold >= 0.0 && threshold <= 1.0))
        throw Error("precision_recall_fbeta: threshold must lie in [0, 1]");
    if (!(beta > 0)) throw Error("precision_recall_fbeta: beta must be positive");

    std::int64_t tp = 0, fp = 0, fn = 0;
    for (Eigen::Index i = 0; i < preds.size(); ++i) {
        const bool predicted = preds.scores(i) >= threshold;
        const bool actual = preds.labels[static_cast<std::size_t>(i)] == 1;
        if (predicted && actual) ++tp;
        else if (predicted) ++fp;
        else if (actual) ++fn;
    }
    ThresholdMetrics out;
    out.threshold = threshold;
    out.beta = beta;
    out.precision = tp + fp > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
    out.recall = tp + fn > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
    out.f_beta = f_beta_score(out.precision, out.recall, beta);
    return out;
}

namespace {

// Indices sorted by score descending; tied scores stay adjacent.
std::vector<Eigen::Index> descending_order(const Eigen::VectorXd& scores) {
    std::vector<Eigen::Index> order(static_cast<std::size_t>(scores.size()));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        return scores(a) > scores(b) || (scores(a) == scores(b) && a < b);
    });
    return order;
}

}  // namespace

RocCurve roc_curve_auc(const ScoredPredictions& preds) {
    preds.validate();
    const auto pos = static_cast<double>(preds.positives());
    const auto neg = static_cast<double>(preds.negatives());
    if (pos == 0 || neg == 0)
        throw Error("roc_curve_auc: need at least one positive and one negative");

    const auto order = descending_order(preds.scores);
    RocCurve out;
    double tp = 0, fp = 0;
    double prev_fpr = 0, prev_tpr = 0;
    std::size_t i = 0;
    while (i < order.size()) {
        const double score = preds.scores(order[i]);
        while (i < order.size() && preds.scores(order[i]) == score) {
            if (preds.labels[static_cast<std::size_t>(order[i])] == 1) ++tp;
            else ++fp;
            ++i;
        }
        const double fpr = fp / neg;
        const double tpr = tp / pos;
        out.points.push_back({score, fpr, tpr});
        out.auc += (fpr - prev_fpr) * 0.5 * (tpr + prev_tpr);
        prev_fpr = fpr;
        prev_tpr = tpr;
    }
    return out;
}

PrCurve pr_curve_ap(const ScoredPredictions& preds) {
    preds.validate();
    const auto pos = static_cast<double>(preds.positives());
    if (pos == 0) throw Error("pr_curve_ap: need at least one positive");

    const auto order = descending_order(preds.scores);
    PrCurve out;
    out.baseline = pos / static_cast<double>(preds.size());
    double tp = 0, fp = 0;
    double prev_recall = 0;
    std::size_t i = 0;
    while (i < order.size()) {
        const double score = preds.scores(order[i]);
        while (i < order.size() && preds.scores(order[i]) == score) {
            if (preds.labels[static_cast<std::size_t>(order[i])] == 1) ++tp;
            else ++fp;
            ++i;
        }
        const double precision = tp / (tp + fp);
        const double recall = tp / pos;
        out.points.push_back({score, recall, precision});
        out.average_precision += (recall - prev_recall) * precision;
        prev_recall = recall;
    }
    return out;
}

std::string curve_to_csv(const std::vector<CurvePoint>& points, const std::string& x_name,
                         const std::string& y_name) {
    auto fmt = [](double v) {
        char buf[32];
        const auto res = std::to_chars(buf, buf + sizeof(buf), v);
        return std::string(buf, res.ptr);
    };
    std::string out = "threshold," + x_name + "," + y_name + "\n";
    for (const auto& p : points)
        out += fmt(p.threshold) + "," + fmt(p.x) + "," + fmt(p.y) + "\n";
    return out;
}

}  // namespace senc
