#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "senc/error.hpp"

namespace senc {

enum class ColumnKind { continuous, nominal };

struct ColumnSchema {
    std::string name;
    ColumnKind kind = ColumnKind::continuous;
    // Nominal columns: label text by code, in first-appearance order.
    // Empty for continuous columns. When closed_labels is set the label
    // list is authoritative and loaders reject labels outside it;
    // otherwise loaders extend the list as new labels appear.
    std::vector<std::string> labels;
    bool closed_labels = false;
};

// Immutable mixed-type dataset with a binary target.
//
// Continuous cells live in an s x c double matrix, nominal cells in an
// s x n integer matrix of label codes; the schema records each column's
// position so the original column order can always be reconstructed.
// Values never change after construction, so a Dataset is safe to share
// across threads.
class Dataset {
public:
    Dataset() = default;

    // `target` holds 1 for minority rows, 0 for majority rows.
    // `target_position` is the target column's index in the CSV header
    // (-1 places it after all feature columns).
    Dataset(std::vector<ColumnSchema> schema, Eigen::MatrixXd continuous,
            Eigen::MatrixXi nominal, std::vector<int> target, std::string minority_label,
            std::string majority_label, std::string target_name = "target",
            Eigen::Index target_position = -1);

    Eigen::Index rows() const { return static_cast<Eigen::Index>(target_.size()); }
    Eigen::Index minority_rows() const { return minority_rows_; }
    Eigen::Index continuous_features() const { return continuous_.cols(); }
    Eigen::Index nominal_features() const { return nominal_.cols(); }
    Eigen::Index feature_count() const { return static_cast<Eigen::Index>(schema_.size()); }

    const std::vector<ColumnSchema>& schema() const { return schema_; }
    const Eigen::MatrixXd& continuous() const { return continuous_; }
    const Eigen::MatrixXi& nominal() const { return nominal_; }
    const std::vector<int>& target() const { return target_; }
    bool is_minority(Eigen::Index row) const { return target_[static_cast<std::size_t>(row)] == 1; }
    std::vector<Eigen::Index> minority_indices() const;

    const std::string& minority_label() const { return minority_label_; }
    const std::string& majority_label() const { return majority_label_; }
    const std::string& target_name() const { return target_name_; }
    Eigen::Index target_position() const { return target_position_; }

    // Storage column (within the continuous or nominal matrix) backing a
    // schema column.
    Eigen::Index storage_index(Eigen::Index schema_col) const {
        return storage_index_[static_cast<std::size_t>(schema_col)];
    }
    // Schema column backing nominal storage column `j`, and vice versa
    // for continuous storage.
    Eigen::Index nominal_schema_column(Eigen::Index j) const {
        return nominal_schema_cols_[static_cast<std::size_t>(j)];
    }
    Eigen::Index continuous_schema_column(Eigen::Index j) const {
        return continuous_schema_cols_[static_cast<std::size_t>(j)];
    }

    const std::string& label_text(Eigen::Index nominal_col, Eigen::Index code) const;

    // Row subset in the given order; schema and label lists are shared.
    Dataset subset(const std::vector<Eigen::Index>& rows) const;

    // Originals followed by synthetic minority rows.
    Dataset with_synthetic_minority(const Eigen::MatrixXd& cont,
                                    const Eigen::MatrixXi& nom) const;

    // Feature matrix in schema order with nominal cells as integer codes.
    Eigen::MatrixXd feature_matrix_with_codes() const;

private:
    std::vector<ColumnSchema> schema_;
    Eigen::MatrixXd continuous_;  // s x c
    Eigen::MatrixXi nominal_;     // s x n, label codes
    std::vector<int> target_;     // 1 = minority
    std::string minority_label_;
    std::string majority_label_;
    std::string target_name_;
    Eigen::Index target_position_ = 0;
    Eigen::Index minority_rows_ = 0;
    std::vector<Eigen::Index> storage_index_;
    std::vector<Eigen::Index> continuous_schema_cols_;
    std::vector<Eigen::Index> nominal_schema_cols_;
};

bool operator==(const Dataset& a, const Dataset& b);
inline bool operator!=(const Dataset& a, const Dataset& b) { return !(a == b); }

// ---------------------------------------------------------------------------
// CSV I/O
// ---------------------------------------------------------------------------

// RFC-4180-style CSV with a header row. Nominal labels are mapped to
// codes in first-appearance order unless the schema closes the label
// set. Rows with missing cells are rejected. When `minority_label` is
// absent the rarer of the two target values is used (error on a tie).
Dataset load_csv(const std::string& path, std::vector<ColumnSchema> schema,
                 const std::string& target_column,
                 const std::optional<std::string>& minority_label);

// Reads the schema sidecar (flat JSON object: column name -> {"kind": ...}
// plus "target" and optional "minority_label" string entries) and loads
// the CSV it describes.
Dataset load_csv_with_sidecar(const std::string& csv_path, const std::string& sidecar_path);

// Full-precision write; load_csv(write_csv(d)) reproduces d exactly.
// The file is written atomically (temp file + rename).
void write_csv(const Dataset& dataset, const std::string& path);

// Sidecar describing `dataset`, for the generate subcommand.
void write_schema_sidecar(const Dataset& dataset, const std::string& path);

// ---------------------------------------------------------------------------
// Synthetic dataset generator
// ---------------------------------------------------------------------------

struct ContinuousColumnSpec {
    std::string name;
    double minority_mean = 0, minority_std = 1;
    double majority_mean = 0, majority_std = 1;
};

struct NominalColumnSpec {
    std::string name;
    std::vector<std::string> labels;
    std::vector<double> minority_probs;  // per label, sums to 1
    std::vector<double> majority_probs;
};

struct GeneratorSpec {
    Eigen::Index rows = 0;
    double imbalance_ratio = 1.0;  // majority : minority, >= 1
    std::vector<ContinuousColumnSpec> continuous;
    std::vector<NominalColumnSpec> nominal;
    std::uint64_t seed = 0;
    std::string target_name = "target";
    std::string minority_label = "min";
    std::string majority_label = "maj";
};

GeneratorSpec generator_spec_from_json_file(const std::string& path);

// Deterministic under (spec, spec.seed): equal inputs give byte-identical
// datasets. Class counts realize the ratio within rounding.
Dataset generate_synthetic(const GeneratorSpec& spec);

// Atomic text write used for every file artifact.
void write_text_atomic(const std::string& path, const std::string& content);

}  // namespace senc
