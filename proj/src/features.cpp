#include "tg/features.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "tg/errors.hpp"

namespace tg {

bool operator==(const FeatureColumn& a, const FeatureColumn& b) {
    if (a.name != b.name || a.kind != b.kind || a.categories != b.categories) return false;
    if (a.values.size() != b.values.size()) return false;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        const double x = a.values[i];
        const double y = b.values[i];
        if (!(x == y || (std::isnan(x) && std::isnan(y)))) return false;
    }
    return true;
}

const FeatureColumn* FeatureBlock::find(const std::string& name) const {
    for (const auto& c : columns)
        if (c.name == name) return &c;
    return nullptr;
}

std::uint32_t encode_category(const CategoricalVocab& vocab, const std::string& value) {
    auto it = std::find(vocab.vocabulary.begin(), vocab.vocabulary.end(), value);
    if (it == vocab.vocabulary.end()) return 0;
    return static_cast<std::uint32_t>(it - vocab.vocabulary.begin()) + 1;
}

ColumnTransform fit_transform_params(const FeatureBlock& block, const std::string& column, TransformKind kind,
                                     Timestamp t_fit) {
    const FeatureColumn* col = block.find(column);
    if (!col) throw ArgumentError("no feature column '" + column + "'");
    const ColumnKind expected = kind == TransformKind::Categorical ? ColumnKind::Categorical : ColumnKind::Numeric;
    if (col->kind != expected)
        throw ArgumentError("column '" + column + "' has the wrong kind for this transform");
    if (col->size() != block.num_rows()) throw ArgumentError("column '" + column + "' is not row-aligned");

    ColumnTransform out;
    out.column = column;
    out.t_fit = t_fit;

    if (kind == TransformKind::Categorical) {
        CategoricalVocab vocab;
        std::unordered_set<std::string> known;
        for (std::size_t i = 0; i < block.num_rows(); ++i) {
            if (!(block.row_times[i] < t_fit)) continue;
            const std::string& value = col->categories[i];
            if (!value.empty() && known.insert(value).second) vocab.vocabulary.push_back(value);
        }
        if (vocab.vocabulary.empty()) throw FitError("no categorical value before t_fit in '" + column + "'");
        out.transform = std::move(vocab);
        return out;
    }

    std::vector<double> fit_values;
    for (std::size_t i = 0; i < block.num_rows(); ++i) {
        if (!(block.row_times[i] < t_fit)) continue;
        const double x = col->values[i];
        if (std::isnan(x))
            out.missing_indicator = true;
        else
            fit_values.push_back(x);
    }
    if (fit_values.empty()) throw FitError("empty fit range for column '" + column + "'");

    const auto n = static_cast<double>(fit_values.size());
    double mean = 0.0;
    for (double x : fit_values) mean += x;
    mean /= n;
    // second pass removes the rounding error of the first
    double residual = 0.0;
    for (double x : fit_values) residual += x - mean;
    mean += residual / n;
    out.impute_value = mean;

    if (kind == TransformKind::MinMax) {
        const auto [lo, hi] = std::minmax_element(fit_values.begin(), fit_values.end());
        out.transform = MinMax{*lo, *hi};
        return out;
    }
    double ss = 0.0;
    for (double x : fit_values) ss += (x - mean) * (x - mean);
    const double sd = std::sqrt(ss / n);
    out.transform = ZScore{mean, sd, sd == 0.0};
    return out;
}

namespace {

double apply_numeric(const Transform& t, double x) {
    if (const auto* z = std::get_if<ZScore>(&t)) return z->constant ? 0.0 : (x - z->mean) / z->std;
    const auto& mm = std::get<MinMax>(t);
    if (mm.hi == mm.lo) return 0.0;
    return (x - mm.lo) / (mm.hi - mm.lo);
}

}  // namespace

FeatureBlock apply_transform(const FeatureBlock& block, const TransformParams& params) {
    FeatureBlock out = block;
    std::vector<FeatureColumn> indicators;
    for (const ColumnTransform& ct : params.columns) {
        auto it = std::find_if(out.columns.begin(), out.columns.end(),
                               [&](const FeatureColumn& c) { return c.name == ct.column; });
        if (it == out.columns.end()) throw ArgumentError("schema mismatch: no column '" + ct.column + "'");
        FeatureColumn& col = *it;

        if (const auto* vocab = std::get_if<CategoricalVocab>(&ct.transform)) {
            if (col.kind == ColumnKind::Encoded) continue;
            if (col.kind != ColumnKind::Categorical)
                throw ArgumentError("schema mismatch: column '" + ct.column + "' is not categorical");
            col.values.resize(col.categories.size());
            for (std::size_t i = 0; i < col.categories.size(); ++i)
                col.values[i] = encode_category(*vocab, col.categories[i]);
            col.categories.clear();
            col.kind = ColumnKind::Encoded;
            continue;
        }

        if (col.kind != ColumnKind::Numeric)
            throw ArgumentError("schema mismatch: column '" + ct.column + "' is not numeric");
        FeatureColumn indicator{col.name + "_missing", ColumnKind::Numeric, {}, {}};
        for (double& x : col.values) {
            const bool missing = std::isnan(x);
            if (ct.missing_indicator) indicator.values.push_back(missing ? 1.0 : 0.0);
            x = apply_numeric(ct.transform, missing ? ct.impute_value : x);
        }
        if (ct.missing_indicator) indicators.push_back(std::move(indicator));
    }
    for (auto& c : indicators) out.columns.push_back(std::move(c));
    return out;
}

}  // namespace tg
