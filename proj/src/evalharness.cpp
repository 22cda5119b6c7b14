#include "senc/evalharness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <sstream>
#include <thread>

#include "senc/rng.hpp"

namespace senc {

namespace {

constexpr std::uint64_t kFoldSalt = 0x666f6c64ULL;
constexpr std::uint64_t kSamplerSalt = 0x73616d70ULL;
constexpr std::uint64_t kForestSalt = 0x666f7265ULL;

}  // namespace

std::vector<std::vector<int>> stratified_folds(const std::vector<int>& labels,
                                               const CVConfig& config) {
    if (config.folds < 2) throw Error("stratified CV needs at least 2 folds");
    if (config.repeats < 1) throw Error("stratified CV needs at least 1 repeat");
    std::vector<Eigen::Index> minority, majority;
    for (std::size_t i = 0; i < labels.size(); ++i)
        (labels[i] == 1 ? minority : majority).push_back(static_cast<Eigen::Index>(i));
    if (minority.empty() || majority.empty())
        throw Error("stratified CV needs both classes present");
    if (static_cast<int>(minority.size()) < config.folds)
        throw Error("stratified CV with " + std::to_string(config.folds) +
                    " folds needs at least that many minority rows, have " +
                    std::to_string(minority.size()));
    if (static_cast<int>(majority.size()) < config.folds)
        throw Error("stratified CV with " + std::to_string(config.folds) +
                    " folds needs at least that many majority rows, have " +
                    std::to_string(majority.size()));

    std::vector<std::vector<int>> assignment(static_cast<std::size_t>(config.repeats));
    for (int r = 0; r < config.repeats; ++r) {
        auto& fold_of = assignment[static_cast<std::size_t>(r)];
        fold_of.assign(labels.size(), 0);
        for (int cls = 0; cls < 2; ++cls) {
            auto rows = cls == 1 ? minority : majority;
            Rng rng = Rng::substream(config.seed, kFoldSalt, static_cast<std::uint64_t>(r),
                                     static_cast<std::uint64_t>(cls));
            rng.shuffle(rows);
            for (std::size_t j = 0; j < rows.size(); ++j)
                fold_of[static_cast<std::size_t>(rows[j])] =
                    static_cast<int>(j % static_cast<std::size_t>(config.folds));
        }
    }
    return assignment;
}

namespace {

FoldResult run_cell(const Dataset& dataset, const Eigen::MatrixXd& parent_features,
                    const SamplerConfig& sampler_config, const ForestParams& forest_params,
                    const CVConfig& cv, const std::vector<std::vector<int>>& folds, int repeat,
                    int fold) {
    FoldResult cell;
    cell.repeat_id = repeat;
    cell.fold_id = fold;
    const auto& fold_of = folds[static_cast<std::size_t>(repeat)];
    for (Eigen::Index i = 0; i < dataset.rows(); ++i) {
        if (fold_of[static_cast<std::size_t>(i)] == fold)
            cell.heldout_rows.push_back(i);
        else
            cell.training_rows.push_back(i);
    }

    const Dataset training = dataset.subset(cell.training_rows);

    SamplerConfig cfg = sampler_config;
    cfg.seed = derive_seed(derive_seed(cv.seed, mix64(sampler_config.seed), kSamplerSalt),
                           static_cast<std::uint64_t>(repeat), static_cast<std::uint64_t>(fold));
    const ResampleResult res = resample(training, cfg);

    cell.provenance.reserve(res.provenance.size());
    for (const auto& p : res.provenance)
        cell.provenance.push_back(
            {cell.training_rows[static_cast<std::size_t>(p.seed_row)],
             cell.training_rows[static_cast<std::size_t>(p.neighbor_row)], p.lambda});
    cell.encoding = res.encoding;

    Eigen::MatrixXd X_train;
    std::vector<int> y_train;
    if (res.raw_one_hot) {
        X_train = res.raw_one_hot->features;
        y_train = res.raw_one_hot->target;
    } else {
        X_train = res.dataset.feature_matrix_with_codes();
        y_train = res.dataset.target();
    }

    ForestParams fparams = forest_params;
    fparams.seed = derive_seed(derive_seed(cv.seed, mix64(forest_params.seed), kForestSalt),
                               static_cast<std::uint64_t>(repeat),
                               static_cast<std::uint64_t>(fold));
    const TrainedForest forest = train_forest(X_train, y_train, fparams);
    cell.importances = forest.importances;

    const auto n_val = static_cast<Eigen::Index>(cell.heldout_rows.size());
    Eigen::MatrixXd X_val(n_val, parent_features.cols());
    cell.heldout_labels.resize(cell.heldout_rows.size());
    for (Eigen::Index i = 0; i < n_val; ++i) {
        const Eigen::Index row = cell.heldout_rows[static_cast<std::size_t>(i)];
        X_val.row(i) = parent_features.row(row);
        cell.heldout_labels[static_cast<std::size_t>(i)] =
            dataset.target()[static_cast<std::size_t>(row)];
    }

    cell.heldout_scores = predict_proba(forest, X_val);
    const ScoredPredictions preds{cell.heldout_scores, cell.heldout_labels};
    cell.threshold_metrics = precision_recall_fbeta(preds, cv.threshold, cv.beta);
    cell.roc_auc = roc_curve_auc(preds).auc;
    cell.pr_auc = pr_curve_ap(preds).average_precision;
    return cell;
}

}  // namespace

std::vector<FoldResult> run_pipeline(const Dataset& dataset, const SamplerConfig& sampler_config,
                                     const ForestParams& forest_params,
                                     const CVConfig& cv_config) {
    const auto folds = stratified_folds(dataset.target(), cv_config);

    // Validation rows are scored in the same feature space the forest
    // trains on: integer category codes, or the indicator expansion when
    // the raw one-hot path is requested.
    std::optional<OneHotLayout> raw_layout;
    Eigen::MatrixXd parent_features;
    if (sampler_config.method == Method::one_hot_smote && sampler_config.raw_one_hot) {
        raw_layout = OneHotLayout::for_dataset(dataset);
        parent_features = raw_layout->expand(dataset);
    } else {
        parent_features = dataset.feature_matrix_with_codes();
    }

    const int cells = cv_config.repeats * cv_config.folds;
    std::vector<FoldResult> results(static_cast<std::size_t>(cells));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(cells));

    int jobs = cv_config.jobs;
    if (jobs <= 0) jobs = static_cast<int>(std::thread::hardware_concurrency());
    jobs = std::clamp(jobs, 1, cells);

    std::atomic<int> next{0};
    auto worker = [&] {
        for (;;) {
            const int cell = next.fetch_add(1);
            if (cell >= cells) return;
            const int repeat = cell / cv_config.folds;
            const int fold = cell % cv_config.folds;
            try {
                results[static_cast<std::size_t>(cell)] =
                    run_cell(dataset, parent_features, sampler_config, forest_params,
                             cv_config, folds, repeat, fold);
            } catch (const Error& e) {
                errors[static_cast<std::size_t>(cell)] = std::make_exception_ptr(
                    Error("repeat " + std::to_string(repeat) + ", fold " + std::to_string(fold) +
                          ": " + e.what()));
            } catch (...) {
                errors[static_cast<std::size_t>(cell)] = std::current_exception();
            }
        }
    };

    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(jobs));
        for (int i = 0; i < jobs; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    for (const auto& err : errors)
        if (err) std::rethrow_exception(err);
    return results;
}

// ---------------------------------------------------------------------------
// Student's t
// ---------------------------------------------------------------------------

namespace {

double beta_continued_fraction(double a, double b, double x) {
    constexpr int kMaxIterations = 300;
    constexpr double kEps = 3e-16;
    constexpr double kTiny = 1e-300;
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIterations; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) break;
    }
    return h;
}

double regularized_incomplete_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double log_bt = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          a * std::log(x) + b * std::log1p(-x);
    const double bt = std::exp(log_bt);
    if (x < (a + 1.0) / (a + b + 2.0)) return bt * beta_continued_fraction(a, b, x) / a;
    return 1.0 - bt * beta_continued_fraction(b, a, 1.0 - x) / b;
}

}  // namespace

double student_t_cdf(double x, double dof) {
    if (dof <= 0) throw Error("student_t_cdf: degrees of freedom must be positive");
    if (std::isinf(x)) return x > 0 ? 1.0 : 0.0;
    const double tail = regularized_incomplete_beta(dof / 2.0, 0.5, dof / (dof + x * x));
    return x > 0 ? 1.0 - 0.5 * tail : 0.5 * tail;
}

TTestResult paired_two_tailed_t_test(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw Error("paired t-test: sequences must have equal length");
    const auto n = static_cast<std::int64_t>(a.size());
    if (n < 2) throw Error("paired t-test: need at least 2 paired observations");

    std::vector<double> d(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
    const double mean = std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(n);
    double ss = 0;
    for (const double v : d) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));

    TTestResult out;
    out.df = n - 1;
    out.mean_difference = mean;
    if (std::all_of(d.begin(), d.end(), [](double v) { return v == 0.0; })) {
        out.t = 0.0;
        out.p = 1.0;  // identical paired samples
        return out;
    }
    if (sd == 0.0) {
        // Constant nonzero difference: the statistic diverges.
        out.t = mean > 0 ? std::numeric_limits<double>::infinity()
                         : -std::numeric_limits<double>::infinity();
        out.p = 0.0;
        return out;
    }
    out.t = mean / (sd / std::sqrt(static_cast<double>(n)));
    const double dof = static_cast<double>(out.df);
    out.p = regularized_incomplete_beta(dof / 2.0, 0.5, dof / (dof + out.t * out.t));
    return out;
}

// ---------------------------------------------------------------------------
// Method comparison
// ---------------------------------------------------------------------------

namespace {

SummaryStat summarize(const std::vector<double>& values) {
    SummaryStat out;
    if (values.empty()) return out;
    out.mean = std::accumulate(values.begin(), values.end(), 0.0) /
               static_cast<double>(values.size());
    if (values.size() < 2) return out;
    double ss = 0;
    for (const double v : values) ss += (v - out.mean) * (v - out.mean);
    out.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
    return out;
}

std::vector<double> metric_column(const std::vector<FoldResult>& folds,
                                  const std::string& metric) {
    std::vector<double> out;
    out.reserve(folds.size());
    for (const auto& cell : folds) {
        if (metric == "precision") out.push_back(cell.threshold_metrics.precision);
        else if (metric == "recall") out.push_back(cell.threshold_metrics.recall);
        else if (metric == "f_beta") out.push_back(cell.threshold_metrics.f_beta);
        else if (metric == "roc_auc") out.push_back(cell.roc_auc);
        else if (metric == "pr_auc") out.push_back(cell.pr_auc);
        else throw Error("unknown metric '" + metric + "'");
    }
    return out;
}

std::vector<std::string> feature_names_for(const Dataset& dataset, const SamplerConfig& config) {
    if (config.method == Method::one_hot_smote && config.raw_one_hot)
        return OneHotLayout::for_dataset(dataset).column_names;
    std::vector<std::string> names;
    names.reserve(dataset.schema().size());
    for (const auto& col : dataset.schema()) names.push_back(col.name);
    return names;
}

}  // namespace

ComparisonReport compare_methods(const Dataset& dataset,
                                 const std::vector<SamplerConfig>& methods,
                                 const ForestParams& forest_params, const CVConfig& cv_config) {
    if (methods.empty()) throw Error("compare_methods: no methods given");

    ComparisonReport report;
    report.cv = cv_config;
    report.forest = forest_params;
    report.rows = dataset.rows();
    report.minority_rows = dataset.minority_rows();
    report.continuous_features = dataset.continuous_features();
    report.nominal_features = dataset.nominal_features();
    report.minority_label = dataset.minority_label();

    std::vector<std::string> taken;
    for (const auto& cfg : methods) {
        MethodOutcome outcome;
        outcome.sampler = cfg;
        std::string name = to_string(cfg.method);
        int suffix = 2;
        while (std::find(taken.begin(), taken.end(), name) != taken.end())
            name = to_string(cfg.method) + "#" + std::to_string(suffix++);
        taken.push_back(name);
        outcome.name = name;
        outcome.feature_names = feature_names_for(dataset, cfg);

        try {
            outcome.folds = run_pipeline(dataset, cfg, forest_params, cv_config);
            outcome.ok = true;
        } catch (const Error& e) {
            outcome.ok = false;
            outcome.na_reason = e.what();
            report.methods.push_back(std::move(outcome));
            continue;
        }

        outcome.precision = summarize(metric_column(outcome.folds, "precision"));
        outcome.recall = summarize(metric_column(outcome.folds, "recall"));
        outcome.f_beta = summarize(metric_column(outcome.folds, "f_beta"));
        outcome.roc_auc = summarize(metric_column(outcome.folds, "roc_auc"));
        outcome.pr_auc = summarize(metric_column(outcome.folds, "pr_auc"));

        Eigen::Index total = 0;
        for (const auto& cell : outcome.folds)
            total += cell.heldout_scores.size();
        outcome.pooled.scores.resize(total);
        outcome.pooled.labels.reserve(static_cast<std::size_t>(total));
        Eigen::Index at = 0;
        for (const auto& cell : outcome.folds) {
            outcome.pooled.scores.segment(at, cell.heldout_scores.size()) = cell.heldout_scores;
            at += cell.heldout_scores.size();
            outcome.pooled.labels.insert(outcome.pooled.labels.end(), cell.heldout_labels.begin(),
                                         cell.heldout_labels.end());
        }
        const auto roc = roc_curve_auc(outcome.pooled);
        const auto pr = pr_curve_ap(outcome.pooled);
        outcome.pooled_roc_auc = roc.auc;
        outcome.pooled_pr_auc = pr.average_precision;
        outcome.pr_baseline = pr.baseline;

        Eigen::VectorXd mean_imp =
            Eigen::VectorXd::Zero(outcome.folds.front().importances.size());
        for (const auto& cell : outcome.folds) mean_imp += cell.importances;
        outcome.mean_importances = mean_imp / static_cast<double>(outcome.folds.size());

        report.methods.push_back(std::move(outcome));
    }

    for (std::size_t i = 0; i < report.methods.size(); ++i) {
        for (std::size_t j = i + 1; j < report.methods.size(); ++j) {
            const auto& a = report.methods[i];
            const auto& b = report.methods[j];
            if (!a.ok || !b.ok) continue;
            for (const std::string metric : {"precision", "recall", "f_beta"}) {
                PairwiseTest test;
                test.metric = metric;
                test.method_a = a.name;
                test.method_b = b.name;
                test.result = paired_two_tailed_t_test(metric_column(a.folds, metric),
                                                       metric_column(b.folds, metric));
                test.significant = test.result.p < 0.05;
                report.tests.push_back(std::move(test));
            }
        }
    }
    return report;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

nlohmann::ordered_json report_to_json(const ComparisonReport& report) {
    using ordered_json = nlohmann::ordered_json;
    ordered_json doc;
    doc["schema_version"] = 1;
    doc["config"] = {
        {"folds", report.cv.folds},
        {"repeats", report.cv.repeats},
        {"seed", report.cv.seed},
        {"threshold", report.cv.threshold},
        {"beta", report.cv.beta},
        {"forest",
         {{"n_trees", report.forest.n_trees},
          {"max_depth", report.forest.max_depth},
          {"min_samples_leaf", report.forest.min_samples_leaf},
          {"features_per_split", report.forest.features_per_split},
          {"bootstrap", report.forest.bootstrap}}},
    };
    doc["dataset"] = {{"rows", report.rows},
                      {"minority_rows", report.minority_rows},
                      {"continuous_features", report.continuous_features},
                      {"nominal_features", report.nominal_features},
                      {"minority_label", report.minority_label}};

    auto methods = ordered_json::array();
    for (const auto& m : report.methods) {
        ordered_json entry;
        entry["name"] = m.name;
        entry["k"] = m.sampler.k;
        entry["amount_mode"] = m.sampler.amount.mode == Amount::Mode::ratio ? "ratio" : "percent";
        entry["amount"] = m.sampler.amount.value;
        if (!m.ok) {
            entry["status"] = "NA";
            entry["reason"] = m.na_reason;
            methods.push_back(std::move(entry));
            continue;
        }
        entry["status"] = "ok";
        auto folds = ordered_json::array();
        for (const auto& cell : m.folds)
            folds.push_back({{"repeat", cell.repeat_id},
                             {"fold", cell.fold_id},
                             {"precision", cell.threshold_metrics.precision},
                             {"recall", cell.threshold_metrics.recall},
                             {"f_beta", cell.threshold_metrics.f_beta},
                             {"roc_auc", cell.roc_auc},
                             {"pr_auc", cell.pr_auc}});
        entry["folds"] = std::move(folds);
        auto stat = [](const SummaryStat& s) {
            return ordered_json{{"mean", s.mean}, {"std", s.stddev}};
        };
        entry["summary"] = {{"precision", stat(m.precision)},
                            {"recall", stat(m.recall)},
                            {"f_beta", stat(m.f_beta)},
                            {"roc_auc_fold_avg", stat(m.roc_auc)},
                            {"pr_auc_fold_avg", stat(m.pr_auc)},
                            {"roc_auc_pooled", m.pooled_roc_auc},
                            {"pr_auc_pooled", m.pooled_pr_auc},
                            {"pr_baseline", m.pr_baseline}};
        ordered_json importances;
        for (std::size_t f = 0; f < m.feature_names.size(); ++f)
            importances[m.feature_names[f]] = m.mean_importances(static_cast<Eigen::Index>(f));
        entry["feature_importances"] = std::move(importances);
        methods.push_back(std::move(entry));
    }
    doc["methods"] = std::move(methods);

    auto tests = ordered_json::array();
    for (const auto& test : report.tests) {
        ordered_json entry = {{"metric", test.metric},
                              {"method_a", test.method_a},
                              {"method_b", test.method_b},
                              {"mean_difference", test.result.mean_difference},
                              {"df", test.result.df},
                              {"p", test.result.p},
                              {"significant", test.significant}};
        if (std::isfinite(test.result.t)) entry["t"] = test.result.t;
        else entry["t"] = test.result.t > 0 ? "+inf" : "-inf";
        tests.push_back(std::move(entry));
    }
    doc["tests"] = std::move(tests);
    return doc;
}

std::string report_table(const ComparisonReport& report, bool ansi_color) {
    const char* bold = ansi_color ? "\033[1m" : "";
    const char* reset = ansi_color ? "\033[0m" : "";
    std::ostringstream out;
    out << std::fixed << std::setprecision(4);

    std::size_t name_w = 8;
    for (const auto& m : report.methods) name_w = std::max(name_w, m.name.size());

    auto cell = [&](const SummaryStat& s) {
        std::ostringstream c;
        c << std::fixed << std::setprecision(4) << s.mean << " +- " << std::setprecision(4)
          << s.stddev;
        return c.str();
    };

    out << bold << std::left << std::setw(static_cast<int>(name_w + 2)) << "method"
        << std::setw(20) << "precision" << std::setw(20) << "recall" << std::setw(20)
        << ("f(beta=" + std::to_string(report.cv.beta).substr(0, 4) + ")") << std::setw(20)
        << "roc-auc" << std::setw(20) << "pr-auc" << reset << "\n";
    for (const auto& m : report.methods) {
        out << std::left << std::setw(static_cast<int>(name_w + 2)) << m.name;
        if (!m.ok) {
            out << "NA (" << m.na_reason << ")\n";
            continue;
        }
        out << std::setw(20) << cell(m.precision) << std::setw(20) << cell(m.recall)
            << std::setw(20) << cell(m.f_beta) << std::setw(20) << cell(m.roc_auc)
            << std::setw(20) << cell(m.pr_auc) << "\n";
    }
    out << "\n";
    for (const auto& m : report.methods) {
        if (!m.ok) continue;
        out << m.name << ": pooled roc-auc " << m.pooled_roc_auc << ", pooled pr-auc "
            << m.pooled_pr_auc << " (baseline " << m.pr_baseline << ")\n";
    }
    if (!report.tests.empty()) {
        out << "\n" << bold << "paired two-tailed t-tests (significant iff p < 0.05)" << reset
            << "\n";
        for (const auto& test : report.tests) {
            out << "  " << std::left << std::setw(10) << test.metric << test.method_a << " vs "
                << test.method_b << ": t=" << test.result.t << " df=" << test.result.df
                << std::setprecision(6) << " -> "
                << (test.significant ? "significant (p=" : "not significant (p=")
                << test.result.p << (test.significant ? " < 0.05)" : " >= 0.05)")
                << std::setprecision(4) << "\n";
        }
    }
    return out.str();
}

}  // namespace senc
