#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "../support/helpers.hpp"
#include "senc/evalharness.hpp"

using namespace senc;

namespace {

std::vector<int> make_labels(int majority, int minority) {
    std::vector<int> labels(static_cast<std::size_t>(majority), 0);
    labels.insert(labels.end(), static_cast<std::size_t>(minority), 1);
    return labels;
}

// Adaptive-Simpson integration of the t density: an independent route to
// the CDF for cross-checking the incomplete-beta implementation.
double t_density(double x, double dof) {
    const double c = std::exp(std::lgamma((dof + 1.0) / 2.0) - std::lgamma(dof / 2.0)) /
                     std::sqrt(dof * M_PI);
    return c * std::pow(1.0 + x * x / dof, -(dof + 1.0) / 2.0);
}

double simpson(double a, double b, double dof) {
    const double m = 0.5 * (a + b);
    return (b - a) / 6.0 * (t_density(a, dof) + 4.0 * t_density(m, dof) + t_density(b, dof));
}

double integrate_t_density(double a, double b, double dof, double whole, int depth) {
    const double m = 0.5 * (a + b);
    const double left = simpson(a, m, dof);
    const double right = simpson(m, b, dof);
    if (depth <= 0 || std::abs(left + right - whole) < 1e-12)
        return left + right;
    return integrate_t_density(a, m, dof, left, depth - 1) +
           integrate_t_density(m, b, dof, right, depth - 1);
}

double t_cdf_by_quadrature(double x, double dof) {
    // Integrate from 0 (the density is symmetric) out to |x|.
    const double tail = integrate_t_density(0.0, std::abs(x), dof,
                                            simpson(0.0, std::abs(x), dof), 40);
    return x >= 0 ? 0.5 + tail : 0.5 - tail;
}

Dataset sentinel_dataset() {
    // 30 rows, 8 minority; row 30 duplicates minority row 3 exactly.
    Rng rng(7117);
    Eigen::MatrixXd cont(31, 2);
    Eigen::MatrixXi nom(31, 1);
    std::vector<int> target(31, 0);
    for (Eigen::Index i = 0; i < 30; ++i) {
        cont(i, 0) = rng.normal(0, 3);
        cont(i, 1) = rng.normal(1, 2);
        nom(i, 0) = static_cast<int>(rng.below(3));
        target[static_cast<std::size_t>(i)] = i < 8 ? 1 : 0;
    }
    for (int l = 0; l < 3; ++l) nom(l, 0) = l;
    cont.row(30) = cont.row(3);
    nom.row(30) = nom.row(3);
    target[30] = 1;
    return Dataset({{"x0", ColumnKind::continuous, {}, false},
                    {"x1", ColumnKind::continuous, {}, false},
                    {"n", ColumnKind::nominal, {"a", "b", "c"}, false}},
                   cont, nom, target, "min", "maj");
}

}  // namespace

TEST_CASE("stratified folds: exact proportions when divisible") {
    CVConfig cv;
    cv.folds = 5;
    cv.repeats = 3;
    cv.seed = 8;
    const auto labels = make_labels(90, 10);
    const auto assignment = stratified_folds(labels, cv);
    REQUIRE(assignment.size() == 3);
    for (const auto& fold_of : assignment) {
        for (int f = 0; f < 5; ++f) {
            int minority = 0, majority = 0;
            for (std::size_t i = 0; i < labels.size(); ++i) {
                if (fold_of[i] != f) continue;
                (labels[i] == 1 ? minority : majority)++;
            }
            CHECK(minority == 2);
            CHECK(majority == 18);
        }
    }
}

TEST_CASE("stratified folds: per-class counts differ by at most one") {
    CVConfig cv;
    cv.folds = 5;
    cv.repeats = 2;
    cv.seed = 4;
    const auto labels = make_labels(23, 7);
    const auto assignment = stratified_folds(labels, cv);
    for (const auto& fold_of : assignment) {
        std::vector<int> minority(5, 0), majority(5, 0);
        for (std::size_t i = 0; i < labels.size(); ++i)
            (labels[i] == 1 ? minority : majority)[static_cast<std::size_t>(fold_of[i])]++;
        for (int f = 0; f < 5; ++f) {
            CHECK(minority[static_cast<std::size_t>(f)] >= 1);
            CHECK(minority[static_cast<std::size_t>(f)] <= 2);
            CHECK(majority[static_cast<std::size_t>(f)] >= 4);
            CHECK(majority[static_cast<std::size_t>(f)] <= 5);
        }
    }
}

TEST_CASE("stratified folds: too few minority rows is a planning error") {
    CVConfig cv;
    cv.folds = 5;
    CHECK_THROWS_WITH_AS(stratified_folds(make_labels(50, 3), cv),
                         doctest::Contains("minority"), Error);
}

TEST_CASE("repeats shuffle differently but preserve stratification") {
    CVConfig cv;
    cv.folds = 4;
    cv.repeats = 2;
    cv.seed = 99;
    const auto labels = make_labels(40, 8);
    const auto assignment = stratified_folds(labels, cv);
    CHECK(assignment[0] != assignment[1]);
}

TEST_CASE("run_pipeline: held-out sets partition the rows") {
    Rng rng(51);
    const Dataset d = testing::random_mixed_dataset(rng, 60, 2, 1, 3, 12, 0.0);
    SamplerConfig sampler;
    sampler.method = Method::smote_enc;
    sampler.k = 3;
    ForestParams forest;
    forest.n_trees = 10;
    CVConfig cv;
    cv.folds = 4;
    cv.repeats = 2;
    cv.seed = 17;
    cv.jobs = 1;
    const auto results = run_pipeline(d, sampler, forest, cv);
    REQUIRE(results.size() == 8);

    for (int r = 0; r < 2; ++r) {
        std::set<Eigen::Index> seen;
        for (const auto& cell : results) {
            if (cell.repeat_id != r) continue;
            for (const Eigen::Index row : cell.heldout_rows) {
                CHECK(seen.insert(row).second);  // pairwise disjoint
            }
            CHECK(cell.heldout_scores.size() ==
                  static_cast<Eigen::Index>(cell.heldout_rows.size()));
        }
        CHECK(seen.size() == static_cast<std::size_t>(d.rows()));
    }
}

TEST_CASE("run_pipeline is deterministic and schedule-independent") {
    Rng rng(52);
    const Dataset d = testing::random_mixed_dataset(rng, 50, 2, 1, 3, 10, 0.0);
    SamplerConfig sampler;
    sampler.method = Method::smote_enc;
    sampler.k = 3;
    sampler.seed = 5;
    ForestParams forest;
    forest.n_trees = 8;
    CVConfig cv;
    cv.folds = 3;
    cv.repeats = 2;
    cv.seed = 23;

    cv.jobs = 1;
    const auto serial = run_pipeline(d, sampler, forest, cv);
    cv.jobs = 4;
    const auto parallel = run_pipeline(d, sampler, forest, cv);
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CHECK(serial[i].heldout_scores == parallel[i].heldout_scores);
        CHECK(serial[i].threshold_metrics.f_beta == parallel[i].threshold_metrics.f_beta);
        CHECK(serial[i].roc_auc == parallel[i].roc_auc);
    }
}

TEST_CASE("leakage sentinel: validation rows never seed synthetics; encoding is fold-local") {
    const Dataset d = sentinel_dataset();
    SamplerConfig sampler;
    sampler.method = Method::smote_enc;
    sampler.k = 2;
    ForestParams forest;
    forest.n_trees = 5;
    CVConfig cv;
    cv.folds = 3;
    cv.repeats = 2;
    cv.seed = 31;
    cv.jobs = 1;
    const auto results = run_pipeline(d, sampler, forest, cv);

    bool sentinel_hit = false;
    for (const auto& cell : results) {
        const std::set<Eigen::Index> training(cell.training_rows.begin(),
                                              cell.training_rows.end());
        const std::set<Eigen::Index> heldout(cell.heldout_rows.begin(),
                                             cell.heldout_rows.end());
        for (const auto& p : cell.provenance) {
            CHECK(training.count(p.seed_row) == 1);
            CHECK(training.count(p.neighbor_row) == 1);
            CHECK(heldout.count(p.seed_row) == 0);
            CHECK(heldout.count(p.neighbor_row) == 0);
        }
        // The duplicated pair (rows 3 and 30): when one is held out, only
        // the in-training copy may act as a seed.
        if (heldout.count(3) == 1 && training.count(30) == 1) sentinel_hit = true;

        // Recount the encoding over training rows only.
        REQUIRE(cell.encoding.has_value());
        const auto& model = *cell.encoding;
        Eigen::Index t = 0;
        for (const Eigen::Index row : cell.training_rows)
            if (d.is_minority(row)) ++t;
        CHECK(model.minority_rows == t);
        CHECK(model.rows == static_cast<Eigen::Index>(cell.training_rows.size()));
        for (std::size_t code = 0; code < model.per_feature[0].size(); ++code) {
            Eigen::Index e = 0, o = 0;
            for (const Eigen::Index row : cell.training_rows) {
                if (d.nominal()(row, 0) == static_cast<int>(code)) {
                    ++e;
                    if (d.is_minority(row)) ++o;
                }
            }
            CHECK(model.per_feature[0][code].total_count == e);
            CHECK(model.per_feature[0][code].minority_count == o);
        }
    }
    CHECK(sentinel_hit);  // the scenario actually occurred in some fold
}

TEST_CASE("sampler errors surface with fold context") {
    Rng rng(53);
    const Dataset d = testing::random_mixed_dataset(rng, 50, 2, 0, 0, 5, 0.0);
    SamplerConfig sampler;
    sampler.method = Method::smote;
    sampler.k = 4;  // training folds hold t = 4, so k must be <= 3
    ForestParams forest;
    CVConfig cv;
    cv.folds = 5;
    cv.repeats = 1;
    CHECK_THROWS_WITH_AS(run_pipeline(d, sampler, forest, cv), doctest::Contains("repeat 0"),
                         Error);
    CHECK_THROWS_WITH_AS(run_pipeline(d, sampler, forest, cv), doctest::Contains("reduce k"),
                         Error);
}

TEST_CASE("t distribution CDF matches quadrature and reference values") {
    // Spot values from an independent implementation of the CDF.
    CHECK(student_t_cdf(1.5, 7) == doctest::Approx(0.911350756505015).epsilon(1e-9));
    CHECK(student_t_cdf(-2.3, 3) == doctest::Approx(0.05249418032223499).epsilon(1e-9));
    CHECK(student_t_cdf(0.0, 12) == doctest::Approx(0.5).epsilon(1e-12));

    for (const double dof : {1.0, 2.0, 4.0, 9.0, 25.0, 49.0}) {
        for (double x = -6.0; x <= 6.0; x += 0.75) {
            CHECK(student_t_cdf(x, dof) ==
                  doctest::Approx(t_cdf_by_quadrature(x, dof)).epsilon(1e-6));
        }
    }
}

TEST_CASE("paired t-test: frozen example, conventions, antisymmetry") {
    SUBCASE("d = [1..5]") {
        const auto r = paired_two_tailed_t_test({2, 3, 4, 5, 6}, {1, 1, 1, 1, 1});
        CHECK(r.t == doctest::Approx(4.242640687119285).epsilon(1e-12));
        CHECK(r.df == 4);
        CHECK(r.p == doctest::Approx(0.013235599563682695).epsilon(1e-6));
        CHECK(r.mean_difference == doctest::Approx(3.0).epsilon(1e-12));
    }
    SUBCASE("identical sequences") {
        const auto r = paired_two_tailed_t_test({0.3, 0.4, 0.5}, {0.3, 0.4, 0.5});
        CHECK(r.t == 0.0);
        CHECK(r.p == 1.0);
    }
    SUBCASE("swapping negates t and keeps p") {
        const std::vector<double> a{0.6, 0.7, 0.8, 0.55};
        const std::vector<double> b{0.5, 0.75, 0.6, 0.5};
        const auto ab = paired_two_tailed_t_test(a, b);
        const auto ba = paired_two_tailed_t_test(b, a);
        CHECK(ab.t == doctest::Approx(-ba.t).epsilon(1e-12));
        CHECK(ab.p == doctest::Approx(ba.p).epsilon(1e-12));
    }
    SUBCASE("constant nonzero difference diverges") {
        const auto r = paired_two_tailed_t_test({2, 2, 2}, {1, 1, 1});
        CHECK(std::isinf(r.t));
        CHECK(r.p == 0.0);
    }
    SUBCASE("bad inputs") {
        CHECK_THROWS_AS(paired_two_tailed_t_test({1, 2}, {1}), Error);
        CHECK_THROWS_AS(paired_two_tailed_t_test({1}, {1}), Error);
    }
}

TEST_CASE("compare_methods: NA cells, self-comparison, importances") {
    ForestParams forest;
    forest.n_trees = 10;
    CVConfig cv;
    cv.folds = 3;
    cv.repeats = 1;
    cv.seed = 3;
    cv.jobs = 1;

    SUBCASE("smote-nc gets an NA cell on all-nominal data") {
        Rng rng(54);
        Eigen::MatrixXi nom(40, 2);
        for (Eigen::Index i = 0; i < 40; ++i)
            for (Eigen::Index j = 0; j < 2; ++j) nom(i, j) = static_cast<int>(rng.below(3));
        for (int l = 0; l < 3; ++l) nom(l, 0) = nom(l, 1) = l;
        std::vector<int> target(40, 0);
        for (int i = 0; i < 10; ++i) target[static_cast<std::size_t>(i)] = 1;
        const Dataset d({{"n0", ColumnKind::nominal, {"a", "b", "c"}, false},
                         {"n1", ColumnKind::nominal, {"a", "b", "c"}, false}},
                        Eigen::MatrixXd(40, 0), nom, target, "min", "maj");

        SamplerConfig enc, nc;
        enc.method = Method::smote_enc;
        enc.k = 3;
        nc.method = Method::smote_nc;
        nc.k = 3;
        const auto report = compare_methods(d, {enc, nc}, forest, cv);
        REQUIRE(report.methods.size() == 2);
        CHECK(report.methods[0].ok);
        CHECK_FALSE(report.methods[1].ok);
        CHECK(report.methods[1].na_reason ==
              "SMOTE-NC requires at least one continuous feature");
        CHECK(report.tests.empty());  // nothing to pair against

        const auto doc = report_to_json(report);
        CHECK(doc["methods"][1]["status"] == "NA");
        const std::string table = report_table(report, false);
        CHECK(table.find("NA (") != std::string::npos);
    }

    SUBCASE("a method compared with itself gives p = 1 everywhere") {
        Rng rng(55);
        const Dataset d = testing::random_mixed_dataset(rng, 60, 2, 1, 3, 12, 0.0);
        SamplerConfig enc;
        enc.method = Method::smote_enc;
        enc.k = 3;
        const auto report = compare_methods(d, {enc, enc}, forest, cv);
        REQUIRE(report.methods.size() == 2);
        CHECK(report.methods[0].name == "smote-enc");
        CHECK(report.methods[1].name == "smote-enc#2");
        REQUIRE(report.tests.size() == 3);
        for (const auto& test : report.tests) {
            CHECK(test.result.t == 0.0);
            CHECK(test.result.p == 1.0);
            CHECK_FALSE(test.significant);
        }
    }

    SUBCASE("fold partitions are shared across methods") {
        Rng rng(56);
        const Dataset d = testing::random_mixed_dataset(rng, 60, 2, 1, 3, 12, 0.0);
        SamplerConfig enc, nc;
        enc.method = Method::smote_enc;
        enc.k = 3;
        nc.method = Method::smote_nc;
        nc.k = 3;
        const auto report = compare_methods(d, {enc, nc}, forest, cv);
        REQUIRE(report.methods[0].ok);
        REQUIRE(report.methods[1].ok);
        for (std::size_t c = 0; c < report.methods[0].folds.size(); ++c) {
            CHECK(report.methods[0].folds[c].heldout_rows ==
                  report.methods[1].folds[c].heldout_rows);
            CHECK(report.methods[0].folds[c].training_rows ==
                  report.methods[1].folds[c].training_rows);
        }
    }

    SUBCASE("nominal feature importances are reported per method") {
        GeneratorSpec spec;
        spec.rows = 200;
        spec.imbalance_ratio = 4.0;
        spec.seed = 60;
        spec.continuous.push_back({"x0", 0.5, 1.0, 0.0, 1.0});
        spec.nominal.push_back({"color", {"r", "g", "b"}, {0.8, 0.1, 0.1}, {0.1, 0.1, 0.8}});
        const Dataset d = generate_synthetic(spec);
        SamplerConfig enc, nc;
        enc.method = Method::smote_enc;
        nc.method = Method::smote_nc;
        const auto report = compare_methods(d, {enc, nc}, forest, cv);
        for (const auto& method : report.methods) {
            REQUIRE(method.ok);
            REQUIRE(method.feature_names.size() == 2);
            CHECK(method.feature_names[1] == "color");
            CHECK(method.mean_importances(1) > 0.05);
        }
    }
}
