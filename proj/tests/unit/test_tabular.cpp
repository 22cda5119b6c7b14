#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "../support/helpers.hpp"
#include "senc/tabular.hpp"

using namespace senc;
namespace fs = std::filesystem;

namespace {

const std::string kDataDir = SENC_TEST_DATA_DIR;

std::string temp_path(const std::string& name) {
    return (fs::temp_directory_path() / ("senc_tabular_" + name)).string();
}

std::vector<ColumnSchema> table1_schema() {
    return {{"C1", ColumnKind::continuous, {}, false},
            {"C2", ColumnKind::continuous, {}, false},
            {"C3", ColumnKind::continuous, {}, false},
            {"N", ColumnKind::nominal, {}, false}};
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
}

}  // namespace

TEST_CASE("load_csv reads the five-row mixed fixture") {
    const Dataset d = load_csv(kDataDir + "/table1.csv", table1_schema(), "target", "min");
    CHECK(d.rows() == 5);
    CHECK(d.minority_rows() == 2);
    CHECK(d.continuous_features() == 3);
    CHECK(d.nominal_features() == 1);
    CHECK(d.feature_count() == 4);
    // Labels in first-appearance order.
    CHECK(d.schema()[3].labels == std::vector<std::string>{"a", "b"});
    CHECK(d.continuous()(0, 0) == 100.0);
    CHECK(d.continuous()(4, 2) == 75.0);
    CHECK(d.nominal()(0, 0) == 0);
    CHECK(d.nominal()(1, 0) == 1);
    CHECK(d.target() == std::vector<int>{1, 1, 0, 0, 0});
    CHECK(d == testing::table1_dataset());
}

TEST_CASE("load_csv_with_sidecar matches the schema-list API") {
    const Dataset a = load_csv_with_sidecar(kDataDir + "/table1.csv",
                                            kDataDir + "/table1.schema.json");
    const Dataset b = load_csv(kDataDir + "/table1.csv", table1_schema(), "target", "min");
    CHECK(a == b);
}

TEST_CASE("header-only file is rejected") {
    const auto path = temp_path("empty.csv");
    write_file(path, "x,target\n");
    CHECK_THROWS_WITH_AS(load_csv(path, {{"x", ColumnKind::continuous, {}, false}}, "target",
                                  std::nullopt),
                         doctest::Contains("no rows"), Error);
}

TEST_CASE("malformed cells are rejected") {
    const auto path = temp_path("bad.csv");
    std::vector<ColumnSchema> schema{{"x", ColumnKind::continuous, {}, false}};

    SUBCASE("non-numeric continuous value") {
        write_file(path, "x,target\nabc,min\n1,maj\n");
        CHECK_THROWS_WITH_AS(load_csv(path, schema, "target", std::nullopt),
                             doctest::Contains("non-numeric"), Error);
    }
    SUBCASE("missing cell") {
        write_file(path, "x,target\n,min\n1,maj\n");
        CHECK_THROWS_WITH_AS(load_csv(path, schema, "target", std::nullopt),
                             doctest::Contains("missing"), Error);
    }
    SUBCASE("ragged row") {
        write_file(path, "x,target\n1,min,extra\n2,maj\n");
        CHECK_THROWS_WITH_AS(load_csv(path, schema, "target", std::nullopt),
                             doctest::Contains("malformed"), Error);
    }
    SUBCASE("three target values") {
        write_file(path, "x,target\n1,min\n2,maj\n3,other\n");
        CHECK_THROWS_WITH_AS(load_csv(path, schema, "target", "min"),
                             doctest::Contains("2 distinct"), Error);
    }
    SUBCASE("minority label absent") {
        write_file(path, "x,target\n1,yes\n2,no\n");
        CHECK_THROWS_WITH_AS(load_csv(path, schema, "target", "min"),
                             doctest::Contains("absent"), Error);
    }
}

TEST_CASE("closed label sets reject unseen labels, open sets extend") {
    const auto path = temp_path("labels.csv");
    write_file(path, "n,target\na,min\nb,min\nc,maj\na,maj\n");
    std::vector<ColumnSchema> closed{{"n", ColumnKind::nominal, {"a", "b"}, true}};
    CHECK_THROWS_WITH_AS(load_csv(path, closed, "target", "min"),
                         doctest::Contains("closed label set"), Error);
    std::vector<ColumnSchema> open{{"n", ColumnKind::nominal, {"a", "b"}, false}};
    const Dataset d = load_csv(path, open, "target", "min");
    CHECK(d.schema()[0].labels == std::vector<std::string>{"a", "b", "c"});
}

TEST_CASE("minority auto-detection picks the rarer value and rejects ties") {
    const auto path = temp_path("auto.csv");
    write_file(path, "x,target\n1,yes\n2,no\n3,no\n");
    const Dataset d = load_csv(path, {{"x", ColumnKind::continuous, {}, false}}, "target",
                               std::nullopt);
    CHECK(d.minority_label() == "yes");
    CHECK(d.majority_label() == "no");

    write_file(path, "x,target\n1,yes\n2,no\n");
    CHECK_THROWS_WITH_AS(load_csv(path, {{"x", ColumnKind::continuous, {}, false}}, "target",
                                  std::nullopt),
                         doctest::Contains("auto-detect"), Error);
}

TEST_CASE("write then load is the identity") {
    const auto path = temp_path("roundtrip.csv");

    SUBCASE("table 1") {
        const Dataset d = testing::table1_dataset();
        write_csv(d, path);
        const Dataset back = load_csv(path, table1_schema(), "target", "min");
        CHECK(back == d);
    }
    SUBCASE("awkward doubles and quoted labels") {
        std::vector<ColumnSchema> schema{{"x", ColumnKind::continuous, {}, false},
                                         {"n", ColumnKind::nominal,
                                          {"plain", "with,comma", "with\"quote", "with\nnewline"},
                                          false}};
        Eigen::MatrixXd cont(4, 1);
        cont << 0.1, -1.0 / 3.0, 1e-308, 12345678901234567.0;
        Eigen::MatrixXi nom(4, 1);
        nom << 0, 1, 2, 3;
        const Dataset d(schema, cont, nom, {1, 1, 0, 0}, "min", "maj");
        write_csv(d, path);
        const Dataset back = load_csv(
            path, {{"x", ColumnKind::continuous, {}, false}, {"n", ColumnKind::nominal, {}, false}},
            "target", "min");
        CHECK(back == d);
    }
    SUBCASE("no nominal columns") {
        Eigen::MatrixXd cont(3, 2);
        cont << 1, 2, 3, 4, 5, 6;
        const Dataset d({{"a", ColumnKind::continuous, {}, false},
                         {"b", ColumnKind::continuous, {}, false}},
                        cont, Eigen::MatrixXi(3, 0), {1, 1, 0}, "min", "maj");
        write_csv(d, path);
        std::ifstream in(path);
        std::string header;
        std::getline(in, header);
        CHECK(header == "a,b,target");
        const Dataset back = load_csv(path,
                                      {{"a", ColumnKind::continuous, {}, false},
                                       {"b", ColumnKind::continuous, {}, false}},
                                      "target", "min");
        CHECK(back == d);
    }
}

TEST_CASE("target column position is preserved through write") {
    const auto path = temp_path("targetpos.csv");
    write_file(path, "x,target,y\n1,min,a\n2,maj,b\n3,maj,a\n");
    const Dataset d = load_csv(path,
                               {{"x", ColumnKind::continuous, {}, false},
                                {"y", ColumnKind::nominal, {}, false}},
                               "target", "min");
    CHECK(d.target_position() == 1);
    const auto out = temp_path("targetpos_out.csv");
    write_csv(d, out);
    std::ifstream in(out);
    std::string header;
    std::getline(in, header);
    CHECK(header == "x,target,y");
    CHECK(load_csv(out,
                   {{"x", ColumnKind::continuous, {}, false},
                    {"y", ColumnKind::nominal, {}, false}},
                   "target", "min") == d);
}

TEST_CASE("counts recomputed from rows match stored counts") {
    Rng rng(404);
    for (int it = 0; it < 20; ++it) {
        const Dataset d = testing::random_mixed_dataset(rng, 30, 2, 2, 3);
        Eigen::Index t = 0;
        for (Eigen::Index i = 0; i < d.rows(); ++i)
            if (d.is_minority(i)) ++t;
        CHECK(t == d.minority_rows());
        CHECK(d.continuous_features() + d.nominal_features() == d.feature_count());
        CHECK(static_cast<Eigen::Index>(d.target().size()) == d.rows());
    }
}

TEST_CASE("generator draws class-conditional nominal labels") {
    GeneratorSpec spec;
    spec.rows = 1000;
    spec.imbalance_ratio = 9.0;
    spec.seed = 77;
    spec.nominal.push_back({"n0", {"x", "y"}, {0.9, 0.1}, {0.1, 0.9}});
    spec.continuous.push_back({"c0", 0.0, 1.0, 0.0, 1.0});
    const Dataset d = generate_synthetic(spec);
    CHECK(d.rows() == 1000);
    CHECK(d.minority_rows() == 100);

    // Recompute chi for label x from realized counts.
    Eigen::Index e = 0, o = 0;
    for (Eigen::Index i = 0; i < d.rows(); ++i) {
        if (d.nominal()(i, 0) == 0) {
            ++e;
            if (d.is_minority(i)) ++o;
        }
    }
    const double ir = static_cast<double>(d.minority_rows()) / static_cast<double>(d.rows());
    const double chi = (static_cast<double>(o) - static_cast<double>(e) * ir) /
                       (static_cast<double>(e) * ir);
    CHECK(chi > 1.0);  // strongly over-represented among minority rows
}

TEST_CASE("generator with identical class tables gives near-zero chi") {
    GeneratorSpec spec;
    spec.rows = 4000;
    spec.imbalance_ratio = 3.0;
    spec.seed = 5;
    spec.nominal.push_back({"n0", {"x", "y", "z"}, {0.3, 0.3, 0.4}, {0.3, 0.3, 0.4}});
    const Dataset d = generate_synthetic(spec);
    const double ir = static_cast<double>(d.minority_rows()) / static_cast<double>(d.rows());
    for (int code = 0; code < 3; ++code) {
        Eigen::Index e = 0, o = 0;
        for (Eigen::Index i = 0; i < d.rows(); ++i)
            if (d.nominal()(i, 0) == code) {
                ++e;
                if (d.is_minority(i)) ++o;
            }
        const double chi = (static_cast<double>(o) - static_cast<double>(e) * ir) /
                           (static_cast<double>(e) * ir);
        CHECK(std::abs(chi) < 0.15);
    }
}

TEST_CASE("generator is deterministic under (spec, seed)") {
    GeneratorSpec spec;
    spec.rows = 200;
    spec.imbalance_ratio = 4.0;
    spec.seed = 123;
    spec.continuous.push_back({"c0", 1.0, 2.0, -1.0, 0.5});
    spec.nominal.push_back({"n0", {"p", "q"}, {0.5, 0.5}, {0.2, 0.8}});
    const Dataset a = generate_synthetic(spec);
    const Dataset b = generate_synthetic(spec);
    CHECK(a == b);

    const auto pa = temp_path("gen_a.csv");
    const auto pb = temp_path("gen_b.csv");
    write_csv(a, pa);
    write_csv(b, pb);
    std::ifstream fa(pa, std::ios::binary), fb(pb, std::ios::binary);
    const std::string ca((std::istreambuf_iterator<char>(fa)), std::istreambuf_iterator<char>());
    const std::string cb((std::istreambuf_iterator<char>(fb)), std::istreambuf_iterator<char>());
    CHECK(ca == cb);

    spec.seed = 124;
    CHECK(generate_synthetic(spec) != a);
}

TEST_CASE("generator validates probability tables") {
    GeneratorSpec spec;
    spec.rows = 100;
    spec.imbalance_ratio = 4.0;
    spec.nominal.push_back({"n0", {"x", "y"}, {0.9, 0.2}, {0.5, 0.5}});
    CHECK_THROWS_WITH_AS(generate_synthetic(spec), doctest::Contains("sum to 1"), Error);
}
