#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include <nlohmann/json.hpp>

#include "senc/tabular.hpp"

namespace senc {

// Per-label association statistics with the minority class.
//
// chi = (o - e') / e' where e' = e * ir is the minority count the label
// would have under class independence. chi is -1 exactly when the label
// never co-occurs with the minority class and 0 when its representation
// is exactly proportional.
struct LabelStats {
    std::int64_t total_count = 0;     // e: rows carrying this label
    std::int64_t minority_count = 0;  // o: minority rows carrying it
    double expected_minority = 0;     // e' = e * ir
    double chi = 0;                   // (o - e') / e'
    double encoded = 0;               // chi * m when scaled, else chi
};

struct EncodingModel {
    double minority_rate = 0;  // ir = t / s
    double median_std = 0;     // m: median minority-class std of continuous features
    bool has_continuous = false;
    bool scaled_by_median = false;   // encoded = chi * m
    bool degenerate_median = false;  // c > 0 but m == 0; fell back to encoded = chi
    Eigen::Index minority_rows = 0;  // t
    Eigen::Index rows = 0;           // s
    Eigen::Index continuous_features = 0;  // c
    // Indexed by nominal storage column, then label code. Entries with
    // total_count == 0 were never observed while fitting.
    std::vector<std::vector<LabelStats>> per_feature;

    bool contains(Eigen::Index feature, Eigen::Index code) const {
        const auto& f = per_feature[static_cast<std::size_t>(feature)];
        return code >= 0 && code < static_cast<Eigen::Index>(f.size()) &&
               f[static_cast<std::size_t>(code)].total_count > 0;
    }
    const LabelStats& at(Eigen::Index feature, Eigen::Index code) const {
        return per_feature[static_cast<std::size_t>(feature)][static_cast<std::size_t>(code)];
    }
};

// Sample standard deviation (n-1 denominator) of each continuous feature
// over minority rows only. Requires c > 0 and t >= 2.
Eigen::VectorXd minority_stds(const Dataset& dataset);

// Median of minority_stds (mean of the middle two when c is even).
// Throws when c == 0, t < 2, or the median is zero.
double median_minority_std(const Dataset& dataset);

// Fits per-label stats on the given rows. When c > 0 the chi scores are
// scaled by median_minority_std; a zero median falls back to raw chi and
// sets degenerate_median. A dataset without nominal features yields an
// empty (but valid) model.
EncodingModel fit_encoding(const Dataset& dataset);

// Encoded feature matrix plus the row-parallel record of original label
// codes. Labels are never reconstructed from floats: decoding reads
// label_records, which also disambiguates chi collisions.
struct EncodedMatrix {
    Eigen::MatrixXd values;        // s x (c + n), schema column order
    Eigen::MatrixXi label_records;  // s x n, original label codes
};

EncodedMatrix encode_dataset(const Dataset& dataset, const EncodingModel& model);

// Rebuilds rows from an encoded matrix: continuous values pass through,
// nominal columns are restored from label_records. Schema, label lists
// and target naming come from `schema_source`.
Dataset inverse_encode(const EncodedMatrix& encoded, const std::vector<int>& target,
                       const Dataset& schema_source);

nlohmann::ordered_json encoding_to_json(const EncodingModel& model, const Dataset& dataset);

}  // namespace senc
