#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "senc/forest.hpp"
#include "senc/metrics.hpp"
#include "senc/samplers.hpp"
#include "senc/tabular.hpp"

namespace senc {

struct CVConfig {
    int folds = 5;
    int repeats = 10;
    std::uint64_t seed = 0;
    double threshold = 0.5;
    double beta = 1.0;
    int jobs = 0;  // 0 = one worker per hardware thread
};

// Per repeat, a fold id per row. Within each class the per-fold counts
// differ by at most 1; repeats use distinct seeded shuffles.
std::vector<std::vector<int>> stratified_folds(const std::vector<int>& labels,
                                               const CVConfig& config);

struct FoldResult {
    int repeat_id = 0;
    int fold_id = 0;
    ThresholdMetrics threshold_metrics;
    double roc_auc = 0;
    double pr_auc = 0;
    std::vector<Eigen::Index> heldout_rows;
    std::vector<Eigen::Index> training_rows;
    Eigen::VectorXd heldout_scores;
    std::vector<int> heldout_labels;
    // Audit payloads: synthetic provenance in parent-dataset row ids and
    // the encoding fitted on the training portion (smote-enc only).
    std::vector<SyntheticProvenance> provenance;
    std::optional<EncodingModel> encoding;
    Eigen::VectorXd importances;
};

// The experimental protocol: per (repeat, fold), resample only the
// training portion (statistics refit per fold), train a forest on the
// resampled data, and score the held-out rows. Deterministic under the
// seeds; cells run in parallel with per-cell substreams so results are
// independent of scheduling and of `jobs`.
std::vector<FoldResult> run_pipeline(const Dataset& dataset, const SamplerConfig& sampler_config,
                                     const ForestParams& forest_params, const CVConfig& cv_config);

struct TTestResult {
    double t = 0;
    std::int64_t df = 0;
    double p = 1;
    double mean_difference = 0;
};

// CDF of Student's t with `dof` degrees of freedom.
double student_t_cdf(double x, double dof);

// Paired two-tailed t-test on equal-length sequences. Identical inputs
// give (t = 0, p = 1) by convention.
TTestResult paired_two_tailed_t_test(const std::vector<double>& a, const std::vector<double>& b);

struct SummaryStat {
    double mean = 0;
    double stddev = 0;  // sample (n-1); 0 when n < 2
};

struct MethodOutcome {
    std::string name;
    SamplerConfig sampler;
    bool ok = false;
    std::string na_reason;
    std::vector<FoldResult> folds;
    SummaryStat precision, recall, f_beta, roc_auc, pr_auc;  // fold-averaged
    double pooled_roc_auc = 0;
    double pooled_pr_auc = 0;
    double pr_baseline = 0;
    ScoredPredictions pooled;  // held-out scores concatenated over all cells
    std::vector<std::string> feature_names;
    Eigen::VectorXd mean_importances;
};

struct PairwiseTest {
    std::string metric;
    std::string method_a, method_b;
    TTestResult result;
    bool significant = false;  // p < 0.05
};

struct ComparisonReport {
    CVConfig cv;
    ForestParams forest;
    Eigen::Index rows = 0, minority_rows = 0;
    Eigen::Index continuous_features = 0, nominal_features = 0;
    std::string minority_label;
    std::vector<MethodOutcome> methods;
    std::vector<PairwiseTest> tests;
};

// Runs every method on byte-identical fold partitions (paired design).
// Methods whose preconditions fail are reported as NA with the error
// message instead of aborting the comparison.
ComparisonReport compare_methods(const Dataset& dataset,
                                 const std::vector<SamplerConfig>& methods,
                                 const ForestParams& forest_params, const CVConfig& cv_config);

nlohmann::ordered_json report_to_json(const ComparisonReport& report);
std::string report_table(const ComparisonReport& report, bool ansi_color);

}  // namespace senc
