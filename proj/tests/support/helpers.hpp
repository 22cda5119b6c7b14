#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "senc/rng.hpp"
#include "senc/tabular.hpp"

namespace senc::testing {

// The five-row mixed dataset used across the suites: three continuous
// features, one nominal feature with labels {a, b}, two minority rows.
inline Dataset table1_dataset() {
    std::vector<ColumnSchema> schema{
        {"C1", ColumnKind::continuous, {}, false},
        {"C2", ColumnKind::continuous, {}, false},
        {"C3", ColumnKind::continuous, {}, false},
        {"N", ColumnKind::nominal, {"a", "b"}, false},
    };
    Eigen::MatrixXd cont(5, 3);
    cont << 100, 20, 85,
            200, 65, 54,
            166, 24, 38,
            344, 67, 89,
            200, 30, 75;
    Eigen::MatrixXi nom(5, 1);
    nom << 0, 1, 0, 1, 1;
    return Dataset(std::move(schema), std::move(cont), std::move(nom), {1, 1, 0, 0, 0}, "min",
                   "maj");
}

// Random mixed dataset for property tests. Guarantees at least
// `min_minority` minority rows and one row per declared label so the
// schema stays in sync with the data; further rows turn minority with
// probability `extra_minority_prob`.
inline Dataset random_mixed_dataset(Rng& rng, Eigen::Index rows, Eigen::Index n_cont,
                                    Eigen::Index n_nom, Eigen::Index labels_per_feature,
                                    Eigen::Index min_minority = 2,
                                    double extra_minority_prob = 0.3) {
    std::vector<ColumnSchema> schema;
    for (Eigen::Index j = 0; j < n_cont; ++j)
        schema.push_back({"c" + std::to_string(j), ColumnKind::continuous, {}, false});
    for (Eigen::Index j = 0; j < n_nom; ++j) {
        std::vector<std::string> labels;
        for (Eigen::Index l = 0; l < labels_per_feature; ++l)
            labels.push_back("f" + std::to_string(j) + "_l" + std::to_string(l));
        schema.push_back({"n" + std::to_string(j), ColumnKind::nominal, labels, false});
    }

    Eigen::MatrixXd cont(rows, n_cont);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < n_cont; ++j) cont(i, j) = rng.normal(0.0, 10.0);

    Eigen::MatrixXi nom(rows, n_nom);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < n_nom; ++j)
            nom(i, j) = static_cast<int>(rng.below(static_cast<std::uint64_t>(labels_per_feature)));
    // Pin the first rows to each label so every declared label occurs.
    for (Eigen::Index j = 0; j < n_nom; ++j)
        for (Eigen::Index l = 0; l < labels_per_feature && l < rows; ++l)
            nom(l, j) = static_cast<int>(l);

    std::vector<int> target(static_cast<std::size_t>(rows), 0);
    for (Eigen::Index i = 0; i < min_minority; ++i) target[static_cast<std::size_t>(i)] = 1;
    for (Eigen::Index i = min_minority; i < rows; ++i)
        target[static_cast<std::size_t>(i)] = rng.uniform() < extra_minority_prob ? 1 : 0;
    if (std::count(target.begin(), target.end(), 0) == 0) target.back() = 0;

    return Dataset(std::move(schema), std::move(cont), std::move(nom), std::move(target), "min",
                   "maj");
}

}  // namespace senc::testing
