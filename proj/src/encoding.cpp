#include "senc/encoding.hpp"

#include <algorithm>
#include <cmath>

namespace senc {

Eigen::VectorXd minority_stds(const Dataset& dataset) {
    const Eigen::Index c = dataset.continuous_features();
    const Eigen::Index t = dataset.minority_rows();
    if (c == 0) throw Error("minority_stds: dataset has no continuous features");
    if (t < 2) throw Error("minority_stds: need at least 2 minority rows, have " +
                           std::to_string(t));

    const auto rows = dataset.minority_indices();
    Eigen::MatrixXd mino(t, c);
    for (Eigen::Index i = 0; i < t; ++i)
        mino.row(i) = dataset.continuous().row(rows[static_cast<std::size_t>(i)]);

    const Eigen::RowVectorXd mean = mino.colwise().mean();
    Eigen::VectorXd stds(c);
    for (Eigen::Index j = 0; j < c; ++j) {
        const double var = (mino.col(j).array() - mean(j)).square().sum() /
                           static_cast<double>(t - 1);
        stds(j) = std::sqrt(var);
    }
    return stds;
}

namespace {

double median_of(Eigen::VectorXd values) {
    std::sort(values.data(), values.data() + values.size());
    const Eigen::Index n = values.size();
    if (n % 2 == 1) return values(n / 2);
    return 0.5 * (values(n / 2 - 1) + values(n / 2));
}

}  // namespace

double median_minority_std(const Dataset& dataset) {
    const double m = median_of(minority_stds(dataset));
    if (m == 0.0)
        throw Error("median_minority_std: minority-class continuous features have zero spread");
    return m;
}

EncodingModel fit_encoding(const Dataset& dataset) {
    const Eigen::Index t = dataset.minority_rows();
    const Eigen::Index s = dataset.rows();
    if (t < 1) throw Error("fit_encoding: dataset has no minority rows");

    EncodingModel model;
    model.minority_rows = t;
    model.rows = s;
    model.continuous_features = dataset.continuous_features();
    model.has_continuous = dataset.continuous_features() > 0;
    model.minority_rate = static_cast<double>(t) / static_cast<double>(s);

    const Eigen::Index n_nom = dataset.nominal_features();
    model.per_feature.resize(static_cast<std::size_t>(n_nom));
    if (n_nom == 0) return model;

    double scale = 1.0;
    if (model.has_continuous) {
        const double m = median_of(minority_stds(dataset));
        model.median_std = m;
        if (m > 0.0) {
            model.scaled_by_median = true;
            scale = m;
        } else {
            model.degenerate_median = true;
        }
    }

    for (Eigen::Index f = 0; f < n_nom; ++f) {
        const auto schema_col = dataset.nominal_schema_column(f);
        const auto n_labels = dataset.schema()[static_cast<std::size_t>(schema_col)].labels.size();
        auto& stats = model.per_feature[static_cast<std::size_t>(f)];
        stats.resize(n_labels);
        for (Eigen::Index i = 0; i < s; ++i) {
            auto& st = stats[static_cast<std::size_t>(dataset.nominal()(i, f))];
            ++st.total_count;
            st.minority_count += dataset.target()[static_cast<std::size_t>(i)];
        }
        for (auto& st : stats) {
            if (st.total_count == 0) continue;  // label never observed; left unencoded
            st.expected_minority = static_cast<double>(st.total_count) * model.minority_rate;
            st.chi = (static_cast<double>(st.minority_count) - st.expected_minority) /
                     st.expected_minority;
            st.encoded = st.chi * scale;
        }
    }
    return model;
}

EncodedMatrix encode_dataset(const Dataset& dataset, const EncodingModel& model) {
    if (static_cast<Eigen::Index>(model.per_feature.size()) != dataset.nominal_features())
        throw Error("encode_dataset: model fitted on a different nominal layout");

    EncodedMatrix out;
    out.values.resize(dataset.rows(), dataset.feature_count());
    out.label_records = dataset.nominal();

    for (Eigen::Index j = 0; j < dataset.feature_count(); ++j) {
        const auto& col = dataset.schema()[static_cast<std::size_t>(j)];
        const Eigen::Index sj = dataset.storage_index(j);
        if (col.kind == ColumnKind::continuous) {
            out.values.col(j) = dataset.continuous().col(sj);
            continue;
        }
        for (Eigen::Index i = 0; i < dataset.rows(); ++i) {
            const Eigen::Index code = dataset.nominal()(i, sj);
            if (!model.contains(sj, code))
                throw Error("encode_dataset: label '" + dataset.label_text(sj, code) +
                            "' of column '" + col.name +
                            "' was not seen while fitting (fit/apply mismatch)");
            out.values(i, j) = model.at(sj, code).encoded;
        }
    }
    return out;
}

Dataset inverse_encode(const EncodedMatrix& encoded, const std::vector<int>& target,
                       const Dataset& schema_source) {
    const Eigen::Index s = encoded.values.rows();
    if (encoded.values.cols() != schema_source.feature_count())
        throw Error("inverse_encode: column count does not match schema");
    if (encoded.label_records.rows() != s ||
        encoded.label_records.cols() != schema_source.nominal_features())
        throw Error("inverse_encode: label records missing for some rows");
    if (static_cast<Eigen::Index>(target.size()) != s)
        throw Error("inverse_encode: target size mismatch");

    Eigen::MatrixXd cont(s, schema_source.continuous_features());
    for (Eigen::Index j = 0; j < schema_source.continuous_features(); ++j)
        cont.col(j) = encoded.values.col(schema_source.continuous_schema_column(j));

    return Dataset(schema_source.schema(), std::move(cont), encoded.label_records, target,
                   schema_source.minority_label(), schema_source.majority_label(),
                   schema_source.target_name(), schema_source.target_position());
}

nlohmann::ordered_json encoding_to_json(const EncodingModel& model, const Dataset& dataset) {
    nlohmann::ordered_json doc;
    doc["schema_version"] = 1;
    doc["ir"] = model.minority_rate;
    if (model.scaled_by_median) doc["m"] = model.median_std;
    else doc["m"] = nullptr;
    doc["t"] = model.minority_rows;
    doc["s"] = model.rows;
    doc["c"] = model.continuous_features;
    doc["scaled_by_m"] = model.scaled_by_median;
    doc["degenerate_m"] = model.degenerate_median;
    auto features = nlohmann::ordered_json::array();
    for (std::size_t f = 0; f < model.per_feature.size(); ++f) {
        const auto schema_col = dataset.nominal_schema_column(static_cast<Eigen::Index>(f));
        nlohmann::ordered_json feature;
        feature["name"] = dataset.schema()[static_cast<std::size_t>(schema_col)].name;
        auto labels = nlohmann::ordered_json::array();
        for (std::size_t code = 0; code < model.per_feature[f].size(); ++code) {
            const auto& st = model.per_feature[f][code];
            if (st.total_count == 0) continue;
            labels.push_back({{"label", dataset.label_text(static_cast<Eigen::Index>(f),
                                                           static_cast<Eigen::Index>(code))},
                              {"e", st.total_count},
                              {"o", st.minority_count},
                              {"e_prime", st.expected_minority},
                              {"chi", st.chi},
                              {"encoded", st.encoded}});
        }
        feature["labels"] = std::move(labels);
        features.push_back(std::move(feature));
    }
    doc["features"] = std::move(features);
    return doc;
}

}  // namespace senc
