// senc: minority oversampling (SMOTE, SMOTE-NC, SMOTE-ENC, one-hot SMOTE)
// with a random-forest evaluation harness. All randomness flows from
// --seed; equal invocations produce byte-identical artifacts.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <unistd.h>

#include <CLI11.hpp>

#include "senc/encoding.hpp"
#include "senc/evalharness.hpp"
#include "senc/metrics.hpp"
#include "senc/samplers.hpp"
#include "senc/tabular.hpp"

namespace {

struct CommonIo {
    std::string input;
    std::string schema;
};

struct EvalFlags {
    senc::CVConfig cv;
    senc::ForestParams forest;
    std::string report_path;
    std::string curves_dir;
    bool raw_one_hot = false;
};

void add_io_flags(CLI::App* cmd, CommonIo& io) {
    cmd->add_option("--input", io.input, "input CSV file")->required();
    cmd->add_option("--schema", io.schema, "schema sidecar JSON file")->required();
}

void add_forest_flags(CLI::App* cmd, senc::ForestParams& forest) {
    cmd->add_option("--trees", forest.n_trees, "number of trees")->capture_default_str();
    cmd->add_option("--max-depth", forest.max_depth, "maximum tree depth (0 = unlimited)")
        ->capture_default_str();
    cmd->add_option("--min-leaf", forest.min_samples_leaf, "minimum samples per leaf")
        ->capture_default_str();
    cmd->add_option("--mtry", forest.features_per_split,
                    "features tried per split (0 = ceil(sqrt(p)))")
        ->capture_default_str();
}

senc::SamplerConfig make_sampler_config(const std::string& method, Eigen::Index k, double ratio,
                                        double percent, bool percent_given, std::uint64_t seed,
                                        bool raw_one_hot) {
    senc::SamplerConfig cfg;
    cfg.method = senc::method_from_string(method);
    cfg.k = k;
    cfg.amount = percent_given ? senc::Amount::percent(percent) : senc::Amount::ratio(ratio);
    cfg.seed = seed;
    cfg.raw_one_hot = raw_one_hot;
    return cfg;
}

void write_json(const std::string& path, const nlohmann::ordered_json& doc) {
    senc::write_text_atomic(path, doc.dump(2) + "\n");
}

void write_curves(const std::string& dir, const senc::ComparisonReport& report) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    for (const auto& method : report.methods) {
        if (!method.ok) continue;
        const auto roc = senc::roc_curve_auc(method.pooled);
        const auto pr = senc::pr_curve_ap(method.pooled);
        senc::write_text_atomic((fs::path(dir) / (method.name + "-roc.csv")).string(),
                                senc::curve_to_csv(roc.points, "fpr", "tpr"));
        senc::write_text_atomic((fs::path(dir) / (method.name + "-pr.csv")).string(),
                                senc::curve_to_csv(pr.points, "recall", "precision"));
    }
}

bool use_color() {
    return ::isatty(STDOUT_FILENO) != 0 && std::getenv("NO_COLOR") == nullptr;
}

int run_compare(const CommonIo& io, const std::vector<std::string>& method_names,
                Eigen::Index k, double ratio, double percent, bool percent_given,
                std::uint64_t seed, const EvalFlags& flags) {
    const senc::Dataset dataset = senc::load_csv_with_sidecar(io.input, io.schema);

    std::vector<senc::SamplerConfig> methods;
    for (const auto& name : method_names)
        methods.push_back(
            make_sampler_config(name, k, ratio, percent, percent_given, seed, flags.raw_one_hot));

    senc::CVConfig cv = flags.cv;
    cv.seed = seed;
    const auto report = senc::compare_methods(dataset, methods, flags.forest, cv);

    std::cout << senc::report_table(report, use_color());
    if (!flags.report_path.empty()) write_json(flags.report_path, senc::report_to_json(report));
    if (!flags.curves_dir.empty()) write_curves(flags.curves_dir, report);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"minority oversampling and evaluation for imbalanced tabular data"};
    app.require_subcommand(1);

    // --- resample ---------------------------------------------------------
    auto* resample_cmd = app.add_subcommand("resample", "oversample the minority class");
    CommonIo rio;
    add_io_flags(resample_cmd, rio);
    std::string r_method = "smote-enc";
    Eigen::Index r_k = 5;
    double r_ratio = 1.0, r_percent = 0.0;
    std::uint64_t r_seed = 0;
    std::string r_output, r_dump_encoding, r_dump_provenance, r_dump_distances;
    resample_cmd->add_option("--method", r_method,
                             "smote | smote-nc | smote-enc | one-hot-smote")
        ->capture_default_str();
    resample_cmd->add_option("--k", r_k, "neighbor count")->capture_default_str();
    auto* ratio_opt =
        resample_cmd->add_option("--ratio", r_ratio, "target minority/majority ratio")
            ->capture_default_str();
    auto* percent_opt =
        resample_cmd->add_option("--percent", r_percent, "synthetic rows as a percent of t");
    percent_opt->excludes(ratio_opt);
    resample_cmd->add_option("--seed", r_seed, "RNG seed")->capture_default_str();
    resample_cmd->add_option("--output", r_output, "output CSV path")->required();
    resample_cmd->add_option("--dump-encoding", r_dump_encoding,
                             "write the fitted label encoding as JSON");
    resample_cmd->add_option("--dump-provenance", r_dump_provenance,
                             "write synthetic-row provenance as JSON");
    resample_cmd->add_option("--dump-distances", r_dump_distances,
                             "write pairwise minority distances and neighbor lists as JSON");

    // --- evaluate / compare -----------------------------------------------
    auto* evaluate_cmd = app.add_subcommand("evaluate", "cross-validated evaluation of one method");
    CommonIo eio;
    add_io_flags(evaluate_cmd, eio);
    std::string e_method = "smote-enc";
    Eigen::Index e_k = 5;
    double e_ratio = 1.0, e_percent = 0.0;
    std::uint64_t e_seed = 0;
    EvalFlags eflags;
    evaluate_cmd->add_option("--method", e_method, "sampler to evaluate")->capture_default_str();
    evaluate_cmd->add_option("--k", e_k, "neighbor count")->capture_default_str();
    auto* e_ratio_opt = evaluate_cmd->add_option("--ratio", e_ratio, "target minority/majority ratio")
                            ->capture_default_str();
    auto* e_percent_opt =
        evaluate_cmd->add_option("--percent", e_percent, "synthetic rows as a percent of t");
    e_percent_opt->excludes(e_ratio_opt);
    evaluate_cmd->add_option("--folds", eflags.cv.folds, "CV folds")->capture_default_str();
    evaluate_cmd->add_option("--repeats", eflags.cv.repeats, "CV repeats")->capture_default_str();
    evaluate_cmd->add_option("--threshold", eflags.cv.threshold, "classification threshold")
        ->capture_default_str();
    evaluate_cmd->add_option("--beta", eflags.cv.beta, "F-beta weighting")->capture_default_str();
    evaluate_cmd->add_option("--seed", e_seed, "RNG seed")->capture_default_str();
    evaluate_cmd->add_option("--jobs", eflags.cv.jobs, "worker threads (0 = auto)")
        ->capture_default_str();
    evaluate_cmd->add_option("--report", eflags.report_path, "write the JSON report here");
    evaluate_cmd->add_option("--curves", eflags.curves_dir, "write ROC/PR curve CSVs here");
    evaluate_cmd->add_flag("--raw-one-hot", eflags.raw_one_hot,
                           "one-hot-smote: train on raw fractional indicators");
    add_forest_flags(evaluate_cmd, eflags.forest);

    auto* compare_cmd = app.add_subcommand("compare", "compare methods on shared CV partitions");
    CommonIo cio;
    add_io_flags(compare_cmd, cio);
    std::vector<std::string> c_methods;
    Eigen::Index c_k = 5;
    double c_ratio = 1.0, c_percent = 0.0;
    std::uint64_t c_seed = 0;
    EvalFlags cflags;
    compare_cmd->add_option("--methods", c_methods, "comma-separated method list")
        ->required()
        ->delimiter(',');
    compare_cmd->add_option("--k", c_k, "neighbor count")->capture_default_str();
    auto* c_ratio_opt = compare_cmd->add_option("--ratio", c_ratio, "target minority/majority ratio")
                            ->capture_default_str();
    auto* c_percent_opt =
        compare_cmd->add_option("--percent", c_percent, "synthetic rows as a percent of t");
    c_percent_opt->excludes(c_ratio_opt);
    compare_cmd->add_option("--folds", cflags.cv.folds, "CV folds")->capture_default_str();
    compare_cmd->add_option("--repeats", cflags.cv.repeats, "CV repeats")->capture_default_str();
    compare_cmd->add_option("--threshold", cflags.cv.threshold, "classification threshold")
        ->capture_default_str();
    compare_cmd->add_option("--beta", cflags.cv.beta, "F-beta weighting")->capture_default_str();
    compare_cmd->add_option("--seed", c_seed, "RNG seed")->capture_default_str();
    compare_cmd->add_option("--jobs", cflags.cv.jobs, "worker threads (0 = auto)")
        ->capture_default_str();
    compare_cmd->add_option("--report", cflags.report_path, "write the JSON report here");
    compare_cmd->add_option("--curves", cflags.curves_dir, "write ROC/PR curve CSVs here");
    compare_cmd->add_flag("--raw-one-hot", cflags.raw_one_hot,
                          "one-hot-smote: train on raw fractional indicators");
    add_forest_flags(compare_cmd, cflags.forest);

    // --- generate -----------------------------------------------------------
    auto* generate_cmd = app.add_subcommand("generate", "generate a synthetic dataset");
    std::string g_spec, g_output, g_schema_out;
    std::uint64_t g_seed = 0;
    generate_cmd->add_option("--spec", g_spec, "generator spec JSON")->required();
    auto* g_seed_opt = generate_cmd->add_option("--seed", g_seed, "RNG seed (overrides the spec)");
    generate_cmd->add_option("--output", g_output, "output CSV path")->required();
    generate_cmd->add_option("--schema-out", g_schema_out, "write the schema sidecar here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (resample_cmd->parsed()) {
            const senc::Dataset dataset = senc::load_csv_with_sidecar(rio.input, rio.schema);
            senc::SamplerConfig cfg =
                make_sampler_config(r_method, r_k, r_ratio, r_percent,
                                    percent_opt->count() > 0, r_seed, false);
            cfg.capture_diagnostics = !r_dump_distances.empty();
            const senc::ResampleResult result = senc::resample(dataset, cfg);
            senc::write_csv(result.dataset, r_output);
            if (!r_dump_encoding.empty()) {
                const senc::EncodingModel model =
                    result.encoding ? *result.encoding : senc::fit_encoding(dataset);
                if (model.degenerate_median)
                    std::cerr << "warning: continuous features have zero minority-class spread; "
                                 "labels encoded as raw chi\n";
                write_json(r_dump_encoding, senc::encoding_to_json(model, dataset));
            }
            if (!r_dump_provenance.empty())
                write_json(r_dump_provenance, senc::provenance_to_json(result));
            if (!r_dump_distances.empty())
                write_json(r_dump_distances, senc::diagnostics_to_json(result));
            std::cout << "wrote " << result.dataset.rows() << " rows ("
                      << result.provenance.size() << " synthetic) to " << r_output << "\n";
            return 0;
        }
        if (evaluate_cmd->parsed())
            return run_compare(eio, {e_method}, e_k, e_ratio, e_percent,
                               e_percent_opt->count() > 0, e_seed, eflags);
        if (compare_cmd->parsed())
            return run_compare(cio, c_methods, c_k, c_ratio, c_percent,
                               c_percent_opt->count() > 0, c_seed, cflags);
        if (generate_cmd->parsed()) {
            senc::GeneratorSpec spec = senc::generator_spec_from_json_file(g_spec);
            if (g_seed_opt->count() > 0) spec.seed = g_seed;
            const senc::Dataset dataset = senc::generate_synthetic(spec);
            senc::write_csv(dataset, g_output);
            if (!g_schema_out.empty()) senc::write_schema_sidecar(dataset, g_schema_out);
            std::cout << "wrote " << dataset.rows() << " rows (" << dataset.minority_rows()
                      << " minority) to " << g_output << "\n";
            return 0;
        }
    } catch (const senc::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
