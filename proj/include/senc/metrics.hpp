#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "senc/error.hpp"

namespace senc {

struct ScoredPredictions {
    Eigen::VectorXd scores;   // minority-class score per row
    std::vector<int> labels;  // 1 = positive/minority

    Eigen::Index size() const { return scores.size(); }
    std::int64_t positives() const;
    std::int64_t negatives() const;
    void validate() const;
};

struct ThresholdMetrics {
    double precision = 0;
    double recall = 0;
    double f_beta = 0;
    double beta = 1;
    double threshold = 0.5;
};

// Positive prediction iff score >= threshold. Degenerate conventions:
// precision = 0 when nothing is predicted positive, recall = 0 when
// there are no positives, F = 0 when precision = recall = 0.
ThresholdMetrics precision_recall_fbeta(const ScoredPredictions& preds, double threshold,
                                        double beta);

double f_beta_score(double precision, double recall, double beta);

struct CurvePoint {
    double threshold = 0;
    double x = 0;  // ROC: FPR, PR: recall
    double y = 0;  // ROC: TPR, PR: precision
};

struct RocCurve {
    std::vector<CurvePoint> points;  // one per distinct score, descending
    double auc = 0;                  // trapezoid; equals tie-corrected ranking probability
};

// Requires at least one positive and one negative. Tied scores are
// grouped into single threshold steps.
RocCurve roc_curve_auc(const ScoredPredictions& preds);

struct PrCurve {
    std::vector<CurvePoint> points;
    double average_precision = 0;  // step rule: sum (R_i - R_{i-1}) * P_i
    double baseline = 0;           // positives / total
};

// Requires at least one positive.
PrCurve pr_curve_ap(const ScoredPredictions& preds);

// CSV point list "threshold,x,y" for external plotting.
std::string curve_to_csv(const std::vector<CurvePoint>& points, const std::string& x_name,
                         const std::string& y_name);

}  // namespace senc
