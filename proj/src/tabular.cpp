#include "senc/tabular.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "senc/rng.hpp"

namespace senc {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

bool parse_double(const std::string& text, double& out) {
    const char* first = text.data();
    const char* last = first + text.size();
    const auto res = std::from_chars(first, last, out);
    return res.ec == std::errc() && res.ptr == last && std::isfinite(out);
}

}  // namespace

// ---------------------------------------------------------------------------
// Dataset
// ---------------------------------------------------------------------------

Dataset::Dataset(std::vector<ColumnSchema> schema, Eigen::MatrixXd continuous,
                 Eigen::MatrixXi nominal, std::vector<int> target, std::string minority_label,
                 std::string majority_label, std::string target_name,
                 Eigen::Index target_position)
    : schema_(std::move(schema)),
      continuous_(std::move(continuous)),
      nominal_(std::move(nominal)),
      target_(std::move(target)),
      minority_label_(std::move(minority_label)),
      majority_label_(std::move(majority_label)),
      target_name_(std::move(target_name)) {
    const auto s = static_cast<Eigen::Index>(target_.size());
    if (continuous_.size() == 0) continuous_.resize(s, 0);
    if (nominal_.size() == 0) nominal_.resize(s, 0);
    if (continuous_.rows() != s || nominal_.rows() != s)
        throw Error("Dataset: row counts of value storage and target disagree");
    if (!continuous_.allFinite())
        throw Error("Dataset: continuous values must be finite");
    if (minority_label_.empty() || majority_label_.empty() || minority_label_ == majority_label_)
        throw Error("Dataset: minority and majority labels must be distinct and non-empty");

    std::unordered_set<std::string> names;
    Eigen::Index n_cont = 0, n_nom = 0;
    storage_index_.reserve(schema_.size());
    for (std::size_t j = 0; j < schema_.size(); ++j) {
        const auto& col = schema_[j];
        if (col.name.empty() || !names.insert(col.name).second)
            throw Error("Dataset: column names must be unique and non-empty (offender: '" +
                        col.name + "')");
        if (col.name == target_name_)
            throw Error("Dataset: feature column '" + col.name + "' collides with target column");
        if (col.kind == ColumnKind::continuous) {
            if (!col.labels.empty())
                throw Error("Dataset: continuous column '" + col.name + "' must not carry labels");
            storage_index_.push_back(n_cont++);
            continuous_schema_cols_.push_back(static_cast<Eigen::Index>(j));
        } else {
            if (col.labels.empty())
                throw Error("Dataset: nominal column '" + col.name + "' needs a label list");
            std::unordered_set<std::string> seen(col.labels.begin(), col.labels.end());
            if (seen.size() != col.labels.size())
                throw Error("Dataset: duplicate labels in nominal column '" + col.name + "'");
            storage_index_.push_back(n_nom++);
            nominal_schema_cols_.push_back(static_cast<Eigen::Index>(j));
        }
    }
    if (continuous_.cols() != n_cont || nominal_.cols() != n_nom)
        throw Error("Dataset: value storage does not match schema column counts");

    for (Eigen::Index j = 0; j < nominal_.cols(); ++j) {
        const auto& labels = schema_[static_cast<std::size_t>(nominal_schema_cols_[
            static_cast<std::size_t>(j)])].labels;
        for (Eigen::Index i = 0; i < s; ++i) {
            const int code = nominal_(i, j);
            if (code < 0 || code >= static_cast<int>(labels.size()))
                throw Error("Dataset: nominal code out of range");
        }
    }

    const Eigen::Index p = feature_count();
    if (target_position < 0) target_position = p;
    if (target_position > p) throw Error("Dataset: target position out of range");
    target_position_ = target_position;

    for (int v : target_) {
        if (v != 0 && v != 1) throw Error("Dataset: target values must be 0 or 1");
        minority_rows_ += v;
    }
}

std::vector<Eigen::Index> Dataset::minority_indices() const {
    std::vector<Eigen::Index> out;
    out.reserve(static_cast<std::size_t>(minority_rows_));
    for (Eigen::Index i = 0; i < rows(); ++i)
        if (is_minority(i)) out.push_back(i);
    return out;
}

const std::string& Dataset::label_text(Eigen::Index nominal_col, Eigen::Index code) const {
    const auto& col = schema_[static_cast<std::size_t>(nominal_schema_column(nominal_col))];
    return col.labels[static_cast<std::size_t>(code)];
}

Dataset Dataset::subset(const std::vector<Eigen::Index>& rows_wanted) const {
    const auto m = static_cast<Eigen::Index>(rows_wanted.size());
    Eigen::MatrixXd cont(m, continuous_.cols());
    Eigen::MatrixXi nom(m, nominal_.cols());
    std::vector<int> tgt(rows_wanted.size());
    for (Eigen::Index i = 0; i < m; ++i) {
        const Eigen::Index r = rows_wanted[static_cast<std::size_t>(i)];
        if (r < 0 || r >= rows()) throw Error("Dataset::subset: row index out of range");
        cont.row(i) = continuous_.row(r);
        nom.row(i) = nominal_.row(r);
        tgt[static_cast<std::size_t>(i)] = target_[static_cast<std::size_t>(r)];
    }
    return Dataset(schema_, std::move(cont), std::move(nom), std::move(tgt), minority_label_,
                   majority_label_, target_name_, target_position_);
}

Dataset Dataset::with_synthetic_minority(const Eigen::MatrixXd& cont,
                                         const Eigen::MatrixXi& nom) const {
    const Eigen::Index extra = std::max(cont.rows(), nom.rows());
    if ((cont.size() > 0 && cont.rows() != extra) || (nom.size() > 0 && nom.rows() != extra))
        throw Error("Dataset: synthetic row blocks disagree on row count");
    const Eigen::Index s = rows();
    Eigen::MatrixXd all_cont(s + extra, continuous_.cols());
    Eigen::MatrixXi all_nom(s + extra, nominal_.cols());
    all_cont.topRows(s) = continuous_;
    all_nom.topRows(s) = nominal_;
    if (continuous_.cols() > 0) all_cont.bottomRows(extra) = cont;
    if (nominal_.cols() > 0) all_nom.bottomRows(extra) = nom;
    std::vector<int> tgt = target_;
    tgt.insert(tgt.end(), static_cast<std::size_t>(extra), 1);
    return Dataset(schema_, std::move(all_cont), std::move(all_nom), std::move(tgt),
                   minority_label_, majority_label_, target_name_, target_position_);
}

Eigen::MatrixXd Dataset::feature_matrix_with_codes() const {
    Eigen::MatrixXd out(rows(), feature_count());
    for (Eigen::Index j = 0; j < feature_count(); ++j) {
        const auto& col = schema_[static_cast<std::size_t>(j)];
        if (col.kind == ColumnKind::continuous)
            out.col(j) = continuous_.col(storage_index(j));
        else
            out.col(j) = nominal_.col(storage_index(j)).cast<double>();
    }
    return out;
}

bool operator==(const Dataset& a, const Dataset& b) {
    if (a.rows() != b.rows() || a.feature_count() != b.feature_count()) return false;
    if (a.minority_label() != b.minority_label() || a.majority_label() != b.majority_label())
        return false;
    if (a.target_name() != b.target_name() || a.target_position() != b.target_position())
        return false;
    for (std::size_t j = 0; j < a.schema().size(); ++j) {
        const auto& ca = a.schema()[j];
        const auto& cb = b.schema()[j];
        if (ca.name != cb.name || ca.kind != cb.kind || ca.labels != cb.labels) return false;
    }
    return a.target() == b.target() && a.continuous() == b.continuous() &&
           a.nominal() == b.nominal();
}

// ---------------------------------------------------------------------------
// CSV parsing / writing
// ---------------------------------------------------------------------------

namespace {

// RFC-4180 records: quoted fields may contain separators, newlines and
// doubled quotes.
std::vector<std::vector<std::string>> parse_csv_text(const std::string& text) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool in_quotes = false;
    bool field_was_quoted = false;
    bool record_started = false;

    auto end_field = [&] {
        record.push_back(std::move(field));
        field.clear();
        field_was_quoted = false;
    };
    auto end_record = [&] {
        end_field();
        records.push_back(std::move(record));
        record.clear();
        record_started = false;
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char ch = text[i];
        if (in_quotes) {
            if (ch == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(ch);
            }
            continue;
        }
        switch (ch) {
            case '"':
                if (!field.empty() || field_was_quoted)
                    throw Error("malformed CSV: quote inside unquoted field");
                in_quotes = true;
                field_was_quoted = true;
                record_started = true;
                break;
            case ',':
                end_field();
                record_started = true;
                break;
            case '\r':
                if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
                end_record();
                break;
            case '\n':
                end_record();
                break;
            default:
                field.push_back(ch);
                record_started = true;
                break;
        }
    }
    if (in_quotes) throw Error("malformed CSV: unterminated quoted field");
    if (record_started || !record.empty() || !field.empty()) end_record();
    return records;
}

bool needs_quoting(const std::string& s) {
    return s.find_first_of(",\"\r\n") != std::string::npos;
}

std::string csv_escape(const std::string& s) {
    if (!needs_quoting(s)) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += "\"\"";
        else out.push_back(ch);
    }
    out += "\"";
    return out;
}

}  // namespace

void write_text_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(target.parent_path(), ec);
    }
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open '" + tmp.string() + "' for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw Error("failed writing '" + tmp.string() + "'");
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw Error("failed to move '" + tmp.string() + "' into place: " + ec.message());
    }
}

Dataset load_csv(const std::string& path, std::vector<ColumnSchema> schema,
                 const std::string& target_column,
                 const std::optional<std::string>& minority_label) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    const auto records = parse_csv_text(buffer.str());
    if (records.empty()) throw Error("malformed CSV: no header row in '" + path + "'");

    const auto& header = records.front();
    // Locate the target column, then require the remaining header
    // columns to match the schema in order.
    Eigen::Index target_position = -1;
    for (std::size_t j = 0; j < header.size(); ++j)
        if (header[j] == target_column) {
            if (target_position >= 0)
                throw Error("target column '" + target_column + "' appears twice");
            target_position = static_cast<Eigen::Index>(j);
        }
    if (target_position < 0)
        throw Error("target column '" + target_column + "' not found in '" + path + "'");
    if (header.size() != schema.size() + 1)
        throw Error("header of '" + path + "' does not match schema: expected " +
                    std::to_string(schema.size()) + " feature columns, found " +
                    std::to_string(header.size() - 1));
    {
        std::size_t sj = 0;
        for (std::size_t j = 0; j < header.size(); ++j) {
            if (static_cast<Eigen::Index>(j) == target_position) continue;
            if (header[j] != schema[sj].name)
                throw Error("header column '" + header[j] + "' does not match schema column '" +
                            schema[sj].name + "'");
            ++sj;
        }
    }

    if (records.size() == 1) throw Error("no rows in '" + path + "'");
    const auto s = static_cast<Eigen::Index>(records.size() - 1);

    Eigen::Index n_cont = 0, n_nom = 0;
    for (const auto& col : schema)
        (col.kind == ColumnKind::continuous ? n_cont : n_nom)++;
    Eigen::MatrixXd cont(s, n_cont);
    Eigen::MatrixXi nom(s, n_nom);
    std::vector<std::string> raw_target(static_cast<std::size_t>(s));

    std::vector<std::unordered_map<std::string, int>> code_of(schema.size());
    for (std::size_t j = 0; j < schema.size(); ++j)
        for (std::size_t l = 0; l < schema[j].labels.size(); ++l)
            code_of[j][schema[j].labels[l]] = static_cast<int>(l);

    for (Eigen::Index i = 0; i < s; ++i) {
        const auto& rec = records[static_cast<std::size_t>(i) + 1];
        if (rec.size() != header.size())
            throw Error("malformed CSV: row " + std::to_string(i + 2) + " has " +
                        std::to_string(rec.size()) + " fields, expected " +
                        std::to_string(header.size()));
        Eigen::Index cj = 0, nj = 0;
        std::size_t sj = 0;
        for (std::size_t j = 0; j < rec.size(); ++j) {
            const std::string& cell = rec[j];
            if (static_cast<Eigen::Index>(j) == target_position) {
                if (cell.empty())
                    throw Error("missing target value at row " + std::to_string(i + 2));
                raw_target[static_cast<std::size_t>(i)] = cell;
                continue;
            }
            auto& col = schema[sj];
            if (cell.empty())
                throw Error("missing value in column '" + col.name + "' at row " +
                            std::to_string(i + 2));
            if (col.kind == ColumnKind::continuous) {
                double v;
                if (!parse_double(cell, v))
                    throw Error("non-numeric value '" + cell + "' in continuous column '" +
                                col.name + "' at row " + std::to_string(i + 2));
                cont(i, cj++) = v;
            } else {
                auto it = code_of[sj].find(cell);
                if (it == code_of[sj].end()) {
                    if (col.closed_labels)
                        throw Error("label '" + cell + "' not in the closed label set of column '" +
                                    col.name + "'");
                    const int code = static_cast<int>(col.labels.size());
                    col.labels.push_back(cell);
                    it = code_of[sj].emplace(cell, code).first;
                }
                nom(i, nj++) = it->second;
            }
            ++sj;
        }
    }

    std::vector<std::string> distinct;
    for (const auto& v : raw_target)
        if (std::find(distinct.begin(), distinct.end(), v) == distinct.end())
            distinct.push_back(v);
    if (distinct.size() != 2)
        throw Error("target column '" + target_column + "' must hold exactly 2 distinct values, found " +
                    std::to_string(distinct.size()));

    std::string minority;
    if (minority_label) {
        minority = *minority_label;
        if (minority != distinct[0] && minority != distinct[1])
            throw Error("minority label '" + minority + "' absent from target values");
    } else {
        const auto c0 = std::count(raw_target.begin(), raw_target.end(), distinct[0]);
        const auto c1 = static_cast<long>(raw_target.size()) - c0;
        if (c0 == c1)
            throw Error("cannot auto-detect minority label: classes are balanced; "
                        "specify minority_label");
        minority = c0 < c1 ? distinct[0] : distinct[1];
    }
    const std::string majority = minority == distinct[0] ? distinct[1] : distinct[0];

    std::vector<int> target(raw_target.size());
    for (std::size_t i = 0; i < raw_target.size(); ++i)
        target[i] = raw_target[i] == minority ? 1 : 0;

    return Dataset(std::move(schema), std::move(cont), std::move(nom), std::move(target),
                   minority, majority, target_column, target_position);
}

Dataset load_csv_with_sidecar(const std::string& csv_path, const std::string& sidecar_path) {
    std::ifstream in(sidecar_path);
    if (!in) throw Error("cannot open schema sidecar '" + sidecar_path + "'");
    ordered_json doc;
    try {
        doc = ordered_json::parse(in);
    } catch (const std::exception& e) {
        throw Error("invalid schema sidecar '" + sidecar_path + "': " + e.what());
    }
    if (!doc.is_object()) throw Error("schema sidecar must be a JSON object");

    std::string target_column;
    std::optional<std::string> minority_label;
    std::unordered_map<std::string, ColumnKind> kinds;
    std::vector<std::string> order;
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        if (it.key() == "target") {
            target_column = it.value().get<std::string>();
        } else if (it.key() == "minority_label") {
            minority_label = it.value().get<std::string>();
        } else if (it.value().is_object()) {
            const std::string kind = it.value().at("kind").get<std::string>();
            if (kind == "continuous") kinds[it.key()] = ColumnKind::continuous;
            else if (kind == "nominal") kinds[it.key()] = ColumnKind::nominal;
            else throw Error("schema sidecar: unknown kind '" + kind + "' for column '" +
                             it.key() + "'");
            order.push_back(it.key());
        } else {
            throw Error("schema sidecar: unexpected entry '" + it.key() + "'");
        }
    }
    if (target_column.empty()) throw Error("schema sidecar: missing \"target\" entry");

    // Column order comes from the CSV header; the sidecar only supplies kinds.
    std::ifstream csv(csv_path, std::ios::binary);
    if (!csv) throw Error("cannot open '" + csv_path + "'");
    std::string header_line;
    std::getline(csv, header_line);
    if (!header_line.empty() && header_line.back() == '\r') header_line.pop_back();
    const auto header_records = parse_csv_text(header_line);
    if (header_records.empty()) throw Error("malformed CSV: no header row in '" + csv_path + "'");
    const auto& header = header_records.front();

    std::vector<ColumnSchema> schema;
    for (const auto& name : header) {
        if (name == target_column) continue;
        auto it = kinds.find(name);
        if (it == kinds.end())
            throw Error("column '" + name + "' is not described by the schema sidecar");
        schema.push_back(ColumnSchema{name, it->second, {}, false});
    }
    if (schema.size() != order.size())
        throw Error("schema sidecar describes columns missing from '" + csv_path + "'");

    return load_csv(csv_path, std::move(schema), target_column, minority_label);
}

void write_csv(const Dataset& dataset, const std::string& path) {
    std::string out;
    const auto p = dataset.feature_count();
    for (Eigen::Index j = 0; j <= p; ++j) {
        if (j > 0) out += ',';
        if (j == dataset.target_position())
            out += csv_escape(dataset.target_name());
        else {
            const Eigen::Index sj = j < dataset.target_position() ? j : j - 1;
            out += csv_escape(dataset.schema()[static_cast<std::size_t>(sj)].name);
        }
    }
    out += '\n';
    for (Eigen::Index i = 0; i < dataset.rows(); ++i) {
        for (Eigen::Index j = 0; j <= p; ++j) {
            if (j > 0) out += ',';
            if (j == dataset.target_position()) {
                out += csv_escape(dataset.is_minority(i) ? dataset.minority_label()
                                                         : dataset.majority_label());
                continue;
            }
            const Eigen::Index sj = j < dataset.target_position() ? j : j - 1;
            const auto& col = dataset.schema()[static_cast<std::size_t>(sj)];
            if (col.kind == ColumnKind::continuous)
                out += format_double(dataset.continuous()(i, dataset.storage_index(sj)));
            else
                out += csv_escape(
                    col.labels[static_cast<std::size_t>(dataset.nominal()(i, dataset.storage_index(sj)))]);
        }
        out += '\n';
    }
    write_text_atomic(path, out);
}

void write_schema_sidecar(const Dataset& dataset, const std::string& path) {
    ordered_json doc;
    for (const auto& col : dataset.schema())
        doc[col.name] = {{"kind", col.kind == ColumnKind::continuous ? "continuous" : "nominal"}};
    doc["target"] = dataset.target_name();
    doc["minority_label"] = dataset.minority_label();
    write_text_atomic(path, doc.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// Synthetic generator
// ---------------------------------------------------------------------------

namespace {

void validate_probs(const std::string& name, const std::vector<double>& probs,
                    std::size_t n_labels) {
    if (probs.size() != n_labels)
        throw Error("generator: column '" + name + "' needs one probability per label");
    double sum = 0;
    for (double p : probs) {
        if (!(p >= 0))
            throw Error("generator: negative probability in column '" + name + "'");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw Error("generator: probabilities of column '" + name + "' must sum to 1");
}

int draw_label(Rng& rng, const std::vector<double>& probs) {
    const double u = rng.uniform();
    double acc = 0;
    for (std::size_t l = 0; l < probs.size(); ++l) {
        acc += probs[l];
        if (u < acc) return static_cast<int>(l);
    }
    return static_cast<int>(probs.size()) - 1;
}

}  // namespace

GeneratorSpec generator_spec_from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open generator spec '" + path + "'");
    ordered_json doc;
    try {
        doc = ordered_json::parse(in);
    } catch (const std::exception& e) {
        throw Error("invalid generator spec '" + path + "': " + e.what());
    }
    GeneratorSpec spec;
    try {
        spec.rows = doc.at("rows").get<Eigen::Index>();
        spec.imbalance_ratio = doc.at("imbalance_ratio").get<double>();
        spec.seed = doc.value("seed", std::uint64_t{0});
        spec.target_name = doc.value("target", std::string("target"));
        spec.minority_label = doc.value("minority_label", std::string("min"));
        spec.majority_label = doc.value("majority_label", std::string("maj"));
        for (const auto& c : doc.value("continuous", ordered_json::array())) {
            ContinuousColumnSpec cs;
            cs.name = c.at("name").get<std::string>();
            cs.minority_mean = c.at("minority").at("mean").get<double>();
            cs.minority_std = c.at("minority").at("std").get<double>();
            cs.majority_mean = c.at("majority").at("mean").get<double>();
            cs.majority_std = c.at("majority").at("std").get<double>();
            spec.continuous.push_back(std::move(cs));
        }
        for (const auto& n : doc.value("nominal", ordered_json::array())) {
            NominalColumnSpec ns;
            ns.name = n.at("name").get<std::string>();
            ns.labels = n.at("labels").get<std::vector<std::string>>();
            ns.minority_probs = n.at("minority_probs").get<std::vector<double>>();
            ns.majority_probs = n.at("majority_probs").get<std::vector<double>>();
            spec.nominal.push_back(std::move(ns));
        }
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        throw Error("invalid generator spec '" + path + "': " + e.what());
    }
    return spec;
}

Dataset generate_synthetic(const GeneratorSpec& spec) {
    if (spec.rows < 2) throw Error("generator: need at least 2 rows");
    if (spec.imbalance_ratio < 1.0) throw Error("generator: imbalance_ratio must be >= 1");
    if (spec.continuous.empty() && spec.nominal.empty())
        throw Error("generator: at least one feature column required");
    for (const auto& c : spec.continuous)
        if (c.minority_std < 0 || c.majority_std < 0)
            throw Error("generator: negative standard deviation in column '" + c.name + "'");
    for (const auto& n : spec.nominal) {
        if (n.labels.empty()) throw Error("generator: column '" + n.name + "' has no labels");
        validate_probs(n.name, n.minority_probs, n.labels.size());
        validate_probs(n.name, n.majority_probs, n.labels.size());
    }

    const Eigen::Index s = spec.rows;
    auto t = static_cast<Eigen::Index>(
        std::llround(static_cast<double>(s) / (1.0 + spec.imbalance_ratio)));
    t = std::max<Eigen::Index>(t, 1);
    if (s - t < 1) throw Error("generator: ratio leaves no majority rows");

    std::vector<int> target(static_cast<std::size_t>(s), 0);
    std::fill_n(target.begin(), static_cast<std::size_t>(t), 1);
    Rng class_rng = Rng::substream(spec.seed, 0x636c6173ULL);  // class assignment stream
    class_rng.shuffle(target);

    Rng rng = Rng::substream(spec.seed, 0x64726177ULL);  // value stream
    Eigen::MatrixXd cont(s, static_cast<Eigen::Index>(spec.continuous.size()));
    Eigen::MatrixXi nom(s, static_cast<Eigen::Index>(spec.nominal.size()));
    for (Eigen::Index i = 0; i < s; ++i) {
        const bool mino = target[static_cast<std::size_t>(i)] == 1;
        for (std::size_t j = 0; j < spec.continuous.size(); ++j) {
            const auto& c = spec.continuous[j];
            cont(i, static_cast<Eigen::Index>(j)) =
                mino ? rng.normal(c.minority_mean, c.minority_std)
                     : rng.normal(c.majority_mean, c.majority_std);
        }
        for (std::size_t j = 0; j < spec.nominal.size(); ++j) {
            const auto& n = spec.nominal[j];
            nom(i, static_cast<Eigen::Index>(j)) =
                draw_label(rng, mino ? n.minority_probs : n.majority_probs);
        }
    }

    std::vector<ColumnSchema> schema;
    for (const auto& c : spec.continuous)
        schema.push_back(ColumnSchema{c.name, ColumnKind::continuous, {}, false});
    for (const auto& n : spec.nominal)
        schema.push_back(ColumnSchema{n.name, ColumnKind::nominal, n.labels, false});

    return Dataset(std::move(schema), std::move(cont), std::move(nom), std::move(target),
                   spec.minority_label, spec.majority_label, spec.target_name);
}

}  // namespace senc
