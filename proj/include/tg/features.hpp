#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "tg/types.hpp"

namespace tg {

// Encoded columns hold vocabulary codes produced by a categorical transform.
enum class ColumnKind : std::uint8_t { Numeric, Categorical, Encoded };

// One feature column. Numeric values use NaN for missing; categorical values are raw
// strings (empty = missing); encoded values are codes stored in `values`.
struct FeatureColumn {
    std::string name;
    ColumnKind kind = ColumnKind::Numeric;
    std::vector<double> values;
    std::vector<std::string> categories;

    std::size_t size() const noexcept { return kind == ColumnKind::Categorical ? categories.size() : values.size(); }

    friend bool operator==(const FeatureColumn& a, const FeatureColumn& b);
};

// Row-aligned columns plus the time each row becomes observable. Fitting only looks at
// rows with row_times[i] < t_fit.
struct FeatureBlock {
    std::vector<Timestamp> row_times;
    std::vector<FeatureColumn> columns;

    std::size_t num_rows() const noexcept { return row_times.size(); }
    const FeatureColumn* find(const std::string& name) const;

    friend bool operator==(const FeatureBlock&, const FeatureBlock&) = default;
};

// Node features (one row per dense node), per-event edge features (row = Event::feature_ref)
// and sparse dynamic node features keyed by (node, t).
struct FeatureTable {
    FeatureBlock nodes;
    FeatureBlock edges;
    FeatureBlock dynamic_nodes;
    std::vector<NodeId> dynamic_node_ids;  // aligned with dynamic_nodes rows

    friend bool operator==(const FeatureTable&, const FeatureTable&) = default;
};

struct ZScore {
    double mean;
    double std;  // population standard deviation
    bool constant;
};

struct MinMax {
    double lo;
    double hi;
};

// Code 0 is reserved for unseen values; vocabulary[i] gets code i + 1.
struct CategoricalVocab {
    std::vector<std::string> vocabulary;
};

using Transform = std::variant<ZScore, MinMax, CategoricalVocab>;

enum class TransformKind : std::uint8_t { ZScore, MinMax, Categorical };

struct ColumnTransform {
    std::string column;
    Transform transform;
    Timestamp t_fit;
    double impute_value = 0.0;   // fit-range mean, used for missing numeric values
    bool missing_indicator = false;  // some fit-range row was missing
};

struct TransformParams {
    std::vector<ColumnTransform> columns;
};

// Fits on rows with row_time < t_fit. ZScore/MinMax need a numeric column; Categorical
// needs a categorical one. Throws FitError when no usable row precedes t_fit and
// ArgumentError on a missing column or kind mismatch.
ColumnTransform fit_transform_params(const FeatureBlock& block, const std::string& column, TransformKind kind,
                                     Timestamp t_fit);

// Applies frozen params column by column; other columns pass through. A numeric column
// whose params carry missing_indicator gets a "<name>_missing" 0/1 column appended.
// Throws ArgumentError if a transformed column is absent or has the wrong kind.
FeatureBlock apply_transform(const FeatureBlock& block, const TransformParams& params);

// Category code for a single value under a fitted vocabulary.
std::uint32_t encode_category(const CategoricalVocab& vocab, const std::string& value);

}  // namespace tg
