#include "senc/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "senc/neighbors.hpp"
#include "senc/rng.hpp"

namespace senc {

namespace {

constexpr std::uint64_t kDrawSalt = 0x73796e7468ULL;
constexpr std::uint64_t kSeedPickSalt = 0x7069636bULL;

}  // namespace

std::string to_string(Method method) {
    switch (method) {
        case Method::smote: return "smote";
        case Method::smote_nc: return "smote-nc";
        case Method::smote_enc: return "smote-enc";
        case Method::one_hot_smote: return "one-hot-smote";
    }
    throw Error("unknown sampler method");
}

Method method_from_string(const std::string& name) {
    std::string n = name;
    std::replace(n.begin(), n.end(), '_', '-');
    if (n == "smote") return Method::smote;
    if (n == "smote-nc") return Method::smote_nc;
    if (n == "smote-enc") return Method::smote_enc;
    if (n == "one-hot-smote") return Method::one_hot_smote;
    throw Error("unknown sampler method '" + name +
                "' (expected smote, smote-nc, smote-enc or one-hot-smote)");
}

namespace {

Eigen::Index synthetic_count(const Dataset& dataset, const Amount& amount) {
    const Eigen::Index t = dataset.minority_rows();
    const Eigen::Index maj = dataset.rows() - t;
    if (amount.mode == Amount::Mode::ratio) {
        if (!(amount.value > 0)) throw Error("oversampling ratio must be positive");
        if (maj < 1) throw Error("ratio mode needs at least one majority row");
        const auto target_minority =
            static_cast<Eigen::Index>(std::llround(amount.value * static_cast<double>(maj)));
        const Eigen::Index n = target_minority - t;
        if (n <= 0)
            throw Error("requested minority/majority ratio " + std::to_string(amount.value) +
                        " does not exceed the dataset's current ratio");
        return n;
    }
    if (!(amount.value > 0)) throw Error("oversampling percent must be positive");
    return static_cast<Eigen::Index>(
        std::floor(amount.value / 100.0 * static_cast<double>(t)));
}

void check_common_preconditions(const Dataset& dataset, const SamplerConfig& config) {
    const Eigen::Index t = dataset.minority_rows();
    if (t < 2)
        throw Error("oversampling needs at least 2 minority rows, have " + std::to_string(t));
    if (config.k < 1 || config.k > t - 1)
        throw Error("k = " + std::to_string(config.k) + " must satisfy 1 <= k <= t-1 = " +
                    std::to_string(t - 1) + " (reduce k or supply more minority samples)");
}

// Majority vote over the ordered neighbor list; ties go to the label of
// the nearest tied neighbor.
int vote_label(const std::vector<Eigen::Index>& neighbors,
               const Eigen::Ref<const Eigen::MatrixXi>& minority_nom, Eigen::Index feature,
               int n_labels) {
    std::vector<int> counts(static_cast<std::size_t>(n_labels), 0);
    for (const Eigen::Index nb : neighbors)
        ++counts[static_cast<std::size_t>(minority_nom(nb, feature))];
    const int best = *std::max_element(counts.begin(), counts.end());
    for (const Eigen::Index nb : neighbors) {
        const int code = minority_nom(nb, feature);
        if (counts[static_cast<std::size_t>(code)] == best) return code;
    }
    return minority_nom(neighbors.front(), feature);  // unreachable
}

Eigen::MatrixXi vote_nominal_rows(const std::vector<SmoteDraw>& draws,
                                  const std::vector<std::vector<Eigen::Index>>& neighbor_lists,
                                  const Dataset& dataset,
                                  const Eigen::Ref<const Eigen::MatrixXi>& minority_nom) {
    Eigen::MatrixXi out(static_cast<Eigen::Index>(draws.size()), minority_nom.cols());
    for (std::size_t i = 0; i < draws.size(); ++i) {
        const auto& nbs = neighbor_lists[static_cast<std::size_t>(draws[i].seed_row)];
        for (Eigen::Index f = 0; f < minority_nom.cols(); ++f) {
            const auto schema_col = dataset.nominal_schema_column(f);
            const int n_labels = static_cast<int>(
                dataset.schema()[static_cast<std::size_t>(schema_col)].labels.size());
            out(static_cast<Eigen::Index>(i), f) = vote_label(nbs, minority_nom, f, n_labels);
        }
    }
    return out;
}

Eigen::MatrixXd interpolate_rows(const std::vector<SmoteDraw>& draws,
                                 const Eigen::Ref<const Eigen::MatrixXd>& minority) {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(draws.size()), minority.cols());
    for (std::size_t i = 0; i < draws.size(); ++i) {
        const auto& d = draws[i];
        out.row(static_cast<Eigen::Index>(i)) =
            minority.row(d.seed_row) +
            d.lambda * (minority.row(d.neighbor_row) - minority.row(d.seed_row));
    }
    return out;
}

std::vector<SyntheticProvenance> to_dataset_provenance(
    const std::vector<SmoteDraw>& draws, const std::vector<Eigen::Index>& minority_ids) {
    std::vector<SyntheticProvenance> out;
    out.reserve(draws.size());
    for (const auto& d : draws)
        out.push_back({minority_ids[static_cast<std::size_t>(d.seed_row)],
                       minority_ids[static_cast<std::size_t>(d.neighbor_row)], d.lambda});
    return out;
}

template <typename DistFn>
MinorityDiagnostics capture_diagnostics(const std::vector<Eigen::Index>& minority_ids,
                                        const std::vector<std::vector<Eigen::Index>>& neighbor_lists,
                                        Eigen::Index t, DistFn&& dist) {
    MinorityDiagnostics diag;
    diag.row_ids = minority_ids;
    diag.pairwise.setZero(t, t);
    for (Eigen::Index i = 0; i < t; ++i)
        for (Eigen::Index j = i + 1; j < t; ++j)
            diag.pairwise(i, j) = diag.pairwise(j, i) = dist(i, j);
    diag.neighbors.reserve(neighbor_lists.size());
    for (const auto& nbs : neighbor_lists) {
        std::vector<Eigen::Index> mapped;
        mapped.reserve(nbs.size());
        for (const Eigen::Index nb : nbs)
            mapped.push_back(minority_ids[static_cast<std::size_t>(nb)]);
        diag.neighbors.push_back(std::move(mapped));
    }
    return diag;
}

}  // namespace

std::vector<SmoteDraw> plan_smote_draws(
    const std::vector<std::vector<Eigen::Index>>& neighbor_lists, Eigen::Index n_synthetic,
    std::uint64_t seed) {
    const auto t = static_cast<Eigen::Index>(neighbor_lists.size());
    if (n_synthetic < 0) throw Error("plan_smote_draws: negative synthetic count");
    std::vector<SmoteDraw> draws;
    draws.reserve(static_cast<std::size_t>(n_synthetic));

    auto emit = [&](Eigen::Index seed_row, Eigen::Index ordinal) {
        Rng rng = Rng::substream(seed, kDrawSalt, static_cast<std::uint64_t>(seed_row),
                                 static_cast<std::uint64_t>(ordinal));
        const auto& nbs = neighbor_lists[static_cast<std::size_t>(seed_row)];
        const auto pick = static_cast<std::size_t>(rng.below(nbs.size()));
        draws.push_back({seed_row, nbs[pick], rng.uniform()});
    };

    if (n_synthetic >= t) {
        const Eigen::Index base = n_synthetic / t;
        const Eigen::Index extra = n_synthetic % t;
        for (Eigen::Index i = 0; i < t; ++i) {
            const Eigen::Index count = base + (i < extra ? 1 : 0);
            for (Eigen::Index j = 0; j < count; ++j) emit(i, j);
        }
    } else {
        std::vector<Eigen::Index> rows(static_cast<std::size_t>(t));
        std::iota(rows.begin(), rows.end(), Eigen::Index{0});
        Rng pick_rng = Rng::substream(seed, kSeedPickSalt);
        pick_rng.shuffle(rows);
        for (Eigen::Index i = 0; i < n_synthetic; ++i) emit(rows[static_cast<std::size_t>(i)], 0);
    }
    return draws;
}

std::pair<Eigen::MatrixXd, std::vector<SmoteDraw>> smote_core(
    const Eigen::Ref<const Eigen::MatrixXd>& minority, Eigen::Index k, Eigen::Index n_synthetic,
    std::uint64_t seed) {
    const Eigen::Index t = minority.rows();
    if (t < 2) throw Error("smote_core: need at least 2 minority rows");
    if (k < 1 || k > t - 1)
        throw Error("smote_core: k must satisfy 1 <= k <= t-1 = " + std::to_string(t - 1));

    std::vector<std::vector<Eigen::Index>> neighbor_lists;
    neighbor_lists.reserve(static_cast<std::size_t>(t));
    for (Eigen::Index i = 0; i < t; ++i) neighbor_lists.push_back(knn_minority(minority, i, k));

    auto draws = plan_smote_draws(neighbor_lists, n_synthetic, seed);
    return {interpolate_rows(draws, minority), std::move(draws)};
}

ResampleResult smote(const Dataset& dataset, const SamplerConfig& config) {
    if (dataset.nominal_features() > 0)
        throw Error("smote requires a dataset without nominal feature columns; "
                    "use smote-enc or one-hot-smote for mixed data");
    check_common_preconditions(dataset, config);
    const Eigen::Index n = synthetic_count(dataset, config.amount);

    const auto minority_ids = dataset.minority_indices();
    const auto t = static_cast<Eigen::Index>(minority_ids.size());
    Eigen::MatrixXd minority(t, dataset.continuous_features());
    for (Eigen::Index i = 0; i < t; ++i)
        minority.row(i) = dataset.continuous().row(minority_ids[static_cast<std::size_t>(i)]);

    auto [synth, draws] = smote_core(minority, config.k, n, config.seed);

    ResampleResult result{dataset.with_synthetic_minority(synth, Eigen::MatrixXi(n, 0)),
                          to_dataset_provenance(draws, minority_ids),
                          std::nullopt,
                          std::nullopt,
                          std::nullopt};
    if (config.capture_diagnostics) {
        std::vector<std::vector<Eigen::Index>> lists;
        lists.reserve(static_cast<std::size_t>(t));
        for (Eigen::Index i = 0; i < t; ++i) lists.push_back(knn_minority(minority, i, config.k));
        result.diagnostics = capture_diagnostics(
            minority_ids, lists, t, [&](Eigen::Index i, Eigen::Index j) {
                return euclidean_distance(minority.row(i), minority.row(j));
            });
    }
    return result;
}

ResampleResult smote_nc(const Dataset& dataset, const SamplerConfig& config) {
    if (dataset.continuous_features() == 0)
        throw Error("SMOTE-NC requires at least one continuous feature");
    check_common_preconditions(dataset, config);
    const Eigen::Index n = synthetic_count(dataset, config.amount);
    const double penalty = median_minority_std(dataset);

    const auto minority_ids = dataset.minority_indices();
    const auto t = static_cast<Eigen::Index>(minority_ids.size());
    Eigen::MatrixXd mino_cont(t, dataset.continuous_features());
    Eigen::MatrixXi mino_nom(t, dataset.nominal_features());
    for (Eigen::Index i = 0; i < t; ++i) {
        mino_cont.row(i) = dataset.continuous().row(minority_ids[static_cast<std::size_t>(i)]);
        mino_nom.row(i) = dataset.nominal().row(minority_ids[static_cast<std::size_t>(i)]);
    }

    std::vector<std::vector<Eigen::Index>> neighbor_lists;
    neighbor_lists.reserve(static_cast<std::size_t>(t));
    for (Eigen::Index i = 0; i < t; ++i)
        neighbor_lists.push_back(knn_minority(mino_cont, mino_nom, penalty, i, config.k));

    auto draws = plan_smote_draws(neighbor_lists, n, config.seed);
    Eigen::MatrixXd synth_cont = interpolate_rows(draws, mino_cont);
    Eigen::MatrixXi synth_nom = vote_nominal_rows(draws, neighbor_lists, dataset, mino_nom);

    ResampleResult result{dataset.with_synthetic_minority(synth_cont, synth_nom),
                          to_dataset_provenance(draws, minority_ids),
                          std::nullopt,
                          std::nullopt,
                          std::nullopt};
    if (config.capture_diagnostics)
        result.diagnostics = capture_diagnostics(
            minority_ids, neighbor_lists, t, [&](Eigen::Index i, Eigen::Index j) {
                return nc_distance(mino_cont.row(i), mino_nom.row(i), mino_cont.row(j),
                                   mino_nom.row(j), penalty);
            });
    return result;
}

ResampleResult smote_enc(const Dataset& dataset, const SamplerConfig& config) {
    check_common_preconditions(dataset, config);
    const Eigen::Index n = synthetic_count(dataset, config.amount);

    EncodingModel model = fit_encoding(dataset);
    const EncodedMatrix encoded = encode_dataset(dataset, model);

    const auto minority_ids = dataset.minority_indices();
    const auto t = static_cast<Eigen::Index>(minority_ids.size());
    Eigen::MatrixXd mino_encoded(t, encoded.values.cols());
    Eigen::MatrixXi mino_nom(t, dataset.nominal_features());
    for (Eigen::Index i = 0; i < t; ++i) {
        mino_encoded.row(i) = encoded.values.row(minority_ids[static_cast<std::size_t>(i)]);
        mino_nom.row(i) = dataset.nominal().row(minority_ids[static_cast<std::size_t>(i)]);
    }

    std::vector<std::vector<Eigen::Index>> neighbor_lists;
    neighbor_lists.reserve(static_cast<std::size_t>(t));
    for (Eigen::Index i = 0; i < t; ++i)
        neighbor_lists.push_back(knn_minority(mino_encoded, i, config.k));

    auto draws = plan_smote_draws(neighbor_lists, n, config.seed);
    Eigen::MatrixXi synth_nom = vote_nominal_rows(draws, neighbor_lists, dataset, mino_nom);

    // Synthetic rows in the encoded space: continuous coordinates are
    // interpolated, nominal coordinates carry the voted label's encoding
    // (distance bookkeeping only; decoding reads the label records).
    EncodedMatrix synth;
    synth.values.resize(static_cast<Eigen::Index>(draws.size()), encoded.values.cols());
    synth.label_records = synth_nom;
    for (Eigen::Index j = 0; j < dataset.feature_count(); ++j) {
        const auto& col = dataset.schema()[static_cast<std::size_t>(j)];
        const Eigen::Index sj = dataset.storage_index(j);
        if (col.kind == ColumnKind::continuous) {
            for (std::size_t i = 0; i < draws.size(); ++i) {
                const auto& d = draws[i];
                synth.values(static_cast<Eigen::Index>(i), j) =
                    mino_encoded(d.seed_row, j) +
                    d.lambda * (mino_encoded(d.neighbor_row, j) - mino_encoded(d.seed_row, j));
            }
        } else {
            for (std::size_t i = 0; i < draws.size(); ++i)
                synth.values(static_cast<Eigen::Index>(i), j) =
                    model.at(sj, synth_nom(static_cast<Eigen::Index>(i), sj)).encoded;
        }
    }

    const Dataset synth_rows = inverse_encode(
        synth, std::vector<int>(draws.size(), 1), dataset);

    ResampleResult result{dataset.with_synthetic_minority(synth_rows.continuous(),
                                                          synth_rows.nominal()),
                          to_dataset_provenance(draws, minority_ids),
                          std::move(model),
                          std::nullopt,
                          std::nullopt};
    if (config.capture_diagnostics)
        result.diagnostics = capture_diagnostics(
            minority_ids, neighbor_lists, t, [&](Eigen::Index i, Eigen::Index j) {
                return euclidean_distance(mino_encoded.row(i), mino_encoded.row(j));
            });
    return result;
}

OneHotLayout OneHotLayout::for_dataset(const Dataset& dataset) {
    OneHotLayout layout;
    Eigen::Index off = 0;
    for (Eigen::Index j = 0; j < dataset.feature_count(); ++j) {
        const auto& col = dataset.schema()[static_cast<std::size_t>(j)];
        layout.offsets.push_back(off);
        if (col.kind == ColumnKind::continuous) {
            layout.block_sizes.push_back(1);
            layout.column_names.push_back(col.name);
            ++off;
        } else {
            layout.block_sizes.push_back(static_cast<Eigen::Index>(col.labels.size()));
            for (const auto& label : col.labels)
                layout.column_names.push_back(col.name + "=" + label);
            off += static_cast<Eigen::Index>(col.labels.size());
        }
    }
    layout.width = off;
    return layout;
}

Eigen::MatrixXd OneHotLayout::expand(const Dataset& dataset) const {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dataset.rows(), width);
    for (Eigen::Index j = 0; j < dataset.feature_count(); ++j) {
        const auto& col = dataset.schema()[static_cast<std::size_t>(j)];
        const Eigen::Index sj = dataset.storage_index(j);
        const Eigen::Index off = offsets[static_cast<std::size_t>(j)];
        if (col.kind == ColumnKind::continuous) {
            out.col(off) = dataset.continuous().col(sj);
        } else {
            for (Eigen::Index i = 0; i < dataset.rows(); ++i)
                out(i, off + dataset.nominal()(i, sj)) = 1.0;
        }
    }
    return out;
}

ResampleResult one_hot_smote(const Dataset& dataset, const SamplerConfig& config) {
    check_common_preconditions(dataset, config);
    const Eigen::Index n = synthetic_count(dataset, config.amount);

    const OneHotLayout layout = OneHotLayout::for_dataset(dataset);
    const auto minority_ids = dataset.minority_indices();
    const auto t = static_cast<Eigen::Index>(minority_ids.size());
    const Eigen::MatrixXd expanded = layout.expand(dataset);
    Eigen::MatrixXd mino_expanded(t, layout.width);
    for (Eigen::Index i = 0; i < t; ++i)
        mino_expanded.row(i) = expanded.row(minority_ids[static_cast<std::size_t>(i)]);

    auto [synth_expanded, draws] = smote_core(mino_expanded, config.k, n, config.seed);

    // Back to the original schema: continuous columns pass through,
    // indicator blocks collapse by argmax (ties to the lowest label code).
    Eigen::MatrixXd synth_cont(synth_expanded.rows(), dataset.continuous_features());
    Eigen::MatrixXi synth_nom(synth_expanded.rows(), dataset.nominal_features());
    for (Eigen::Index j = 0; j < dataset.feature_count(); ++j) {
        const auto& col = dataset.schema()[static_cast<std::size_t>(j)];
        const Eigen::Index sj = dataset.storage_index(j);
        const Eigen::Index off = layout.offsets[static_cast<std::size_t>(j)];
        if (col.kind == ColumnKind::continuous) {
            synth_cont.col(sj) = synth_expanded.col(off);
            continue;
        }
        const Eigen::Index block = layout.block_sizes[static_cast<std::size_t>(j)];
        for (Eigen::Index i = 0; i < synth_expanded.rows(); ++i) {
            Eigen::Index best = 0;
            for (Eigen::Index l = 1; l < block; ++l)
                if (synth_expanded(i, off + l) > synth_expanded(i, off + best)) best = l;
            synth_nom(i, sj) = static_cast<int>(best);
        }
    }

    ResampleResult result{dataset.with_synthetic_minority(synth_cont, synth_nom),
                          to_dataset_provenance(draws, minority_ids),
                          std::nullopt,
                          std::nullopt,
                          std::nullopt};
    if (config.raw_one_hot) {
        RawOneHotResample raw;
        raw.features.resize(dataset.rows() + synth_expanded.rows(), layout.width);
        raw.features.topRows(dataset.rows()) = expanded;
        raw.features.bottomRows(synth_expanded.rows()) = synth_expanded;
        raw.target = dataset.target();
        raw.target.insert(raw.target.end(), static_cast<std::size_t>(synth_expanded.rows()), 1);
        raw.column_names = layout.column_names;
        result.raw_one_hot = std::move(raw);
    }
    if (config.capture_diagnostics) {
        std::vector<std::vector<Eigen::Index>> lists;
        lists.reserve(static_cast<std::size_t>(t));
        for (Eigen::Index i = 0; i < t; ++i)
            lists.push_back(knn_minority(mino_expanded, i, config.k));
        result.diagnostics = capture_diagnostics(
            minority_ids, lists, t, [&](Eigen::Index i, Eigen::Index j) {
                return euclidean_distance(mino_expanded.row(i), mino_expanded.row(j));
            });
    }
    return result;
}

ResampleResult resample(const Dataset& dataset, const SamplerConfig& config) {
    switch (config.method) {
        case Method::smote: return smote(dataset, config);
        case Method::smote_nc: return smote_nc(dataset, config);
        case Method::smote_enc: return smote_enc(dataset, config);
        case Method::one_hot_smote: return one_hot_smote(dataset, config);
    }
    throw Error("unknown sampler method");
}

nlohmann::ordered_json provenance_to_json(const ResampleResult& result) {
    nlohmann::ordered_json doc;
    doc["schema_version"] = 1;
    const Eigen::Index originals = result.dataset.rows() -
                                   static_cast<Eigen::Index>(result.provenance.size());
    auto rows = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < result.provenance.size(); ++i) {
        const auto& p = result.provenance[i];
        rows.push_back({{"row", originals + static_cast<Eigen::Index>(i)},
                        {"seed_row", p.seed_row},
                        {"neighbor_row", p.neighbor_row},
                        {"lambda", p.lambda}});
    }
    doc["synthetics"] = std::move(rows);
    return doc;
}

nlohmann::ordered_json diagnostics_to_json(const ResampleResult& result) {
    if (!result.diagnostics)
        throw Error("no diagnostics were captured for this resampling run");
    const auto& diag = *result.diagnostics;
    nlohmann::ordered_json doc;
    doc["schema_version"] = 1;
    doc["row_ids"] = diag.row_ids;
    auto pairwise = nlohmann::ordered_json::array();
    for (Eigen::Index i = 0; i < diag.pairwise.rows(); ++i) {
        auto row = nlohmann::ordered_json::array();
        for (Eigen::Index j = 0; j < diag.pairwise.cols(); ++j) row.push_back(diag.pairwise(i, j));
        pairwise.push_back(std::move(row));
    }
    doc["pairwise"] = std::move(pairwise);
    doc["neighbors"] = diag.neighbors;
    return doc;
}

}  // namespace senc
