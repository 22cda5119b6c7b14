#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "senc/encoding.hpp"
#include "senc/tabular.hpp"

namespace senc {

enum class Method { smote, smote_nc, smote_enc, one_hot_smote };

std::string to_string(Method method);
Method method_from_string(const std::string& name);

// Oversampling amount: either a target minority/majority ratio or a
// percentage of t (floor(n/100 * t) synthetic rows).
struct Amount {
    enum class Mode { ratio, percent };
    Mode mode = Mode::ratio;
    double value = 1.0;

    static Amount ratio(double r) { return {Mode::ratio, r}; }
    static Amount percent(double n) { return {Mode::percent, n}; }
};

struct SamplerConfig {
    Method method = Method::smote_enc;
    Eigen::Index k = 5;
    Amount amount{};
    std::uint64_t seed = 0;
    // Record pairwise minority distances and neighbor lists on the result.
    bool capture_diagnostics = false;
    // one_hot_smote only: also keep the resampled indicator matrix with
    // fractional synthetic indicators, for classifiers that consume the
    // raw one-hot space.
    bool raw_one_hot = false;
};

// Row indices refer to the dataset passed to the sampler; synthetic row
// i of the result is dataset row s + i.
struct SyntheticProvenance {
    Eigen::Index seed_row = 0;
    Eigen::Index neighbor_row = 0;
    double lambda = 0;
};

struct MinorityDiagnostics {
    std::vector<Eigen::Index> row_ids;  // minority rows, dataset ids
    Eigen::MatrixXd pairwise;           // t x t distances in the sampler's space
    std::vector<std::vector<Eigen::Index>> neighbors;  // per minority row, k dataset ids
};

struct RawOneHotResample {
    Eigen::MatrixXd features;  // originals then synthetics, indicator space
    std::vector<int> target;
    std::vector<std::string> column_names;
};

struct ResampleResult {
    Dataset dataset;  // originals first, bit-identical, then synthetics
    std::vector<SyntheticProvenance> provenance;
    std::optional<EncodingModel> encoding;  // smote_enc only
    std::optional<MinorityDiagnostics> diagnostics;
    std::optional<RawOneHotResample> raw_one_hot;
};

// Interpolation plan entry with indices into the minority row block.
struct SmoteDraw {
    Eigen::Index seed_row = 0;
    Eigen::Index neighbor_row = 0;
    double lambda = 0;
};

// Draw plan shared by every sampler: seeds cycle round-robin when
// n_synthetic >= t (per-seed counts differ by at most 1) and are a
// seeded random sample without replacement when n_synthetic < t; the
// interpolation neighbor is uniform over the seed's k-NN list and
// lambda is Uniform[0,1). Each synthetic row draws from its own
// substream of (seed, seed_row, ordinal), so output is independent of
// generation order.
std::vector<SmoteDraw> plan_smote_draws(
    const std::vector<std::vector<Eigen::Index>>& neighbor_lists, Eigen::Index n_synthetic,
    std::uint64_t seed);

// Classic SMOTE kernel over a dense minority matrix: each synthetic row
// is seed + lambda * (neighbor - seed) for a euclidean k-NN neighbor.
std::pair<Eigen::MatrixXd, std::vector<SmoteDraw>> smote_core(
    const Eigen::Ref<const Eigen::MatrixXd>& minority, Eigen::Index k, Eigen::Index n_synthetic,
    std::uint64_t seed);

// SMOTE for purely continuous datasets; rejects nominal columns.
ResampleResult smote(const Dataset& dataset, const SamplerConfig& config);

// SMOTE-NC: fixed-penalty mixed distance; synthetic nominal values by
// majority vote among the seed's k nearest minority neighbors. Requires
// at least one continuous feature.
ResampleResult smote_nc(const Dataset& dataset, const SamplerConfig& config);

// SMOTE-ENC: nominal labels encoded by minority association, neighbors
// found with plain euclidean distance in the encoded space, nominal
// values by neighbor vote, labels restored by inverse encoding. Handles
// mixed, all-nominal and nominal-free datasets.
ResampleResult smote_enc(const Dataset& dataset, const SamplerConfig& config);

// One-hot expansion followed by plain SMOTE; synthetic indicator blocks
// map back to labels by per-feature argmax.
ResampleResult one_hot_smote(const Dataset& dataset, const SamplerConfig& config);

ResampleResult resample(const Dataset& dataset, const SamplerConfig& config);

// Indicator-column layout used by one_hot_smote.
struct OneHotLayout {
    std::vector<Eigen::Index> offsets;      // per schema column, first expanded column
    std::vector<Eigen::Index> block_sizes;  // 1 for continuous, label count for nominal
    Eigen::Index width = 0;
    std::vector<std::string> column_names;

    static OneHotLayout for_dataset(const Dataset& dataset);
    Eigen::MatrixXd expand(const Dataset& dataset) const;
};

nlohmann::ordered_json provenance_to_json(const ResampleResult& result);
nlohmann::ordered_json diagnostics_to_json(const ResampleResult& result);

}  // namespace senc
