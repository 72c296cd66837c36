#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace tg {

// Mann-Whitney AUC with average-rank ties:
//   (#{pos > neg} + 0.5 * #{pos == neg}) / (P * N).
// Throws MetricError if either list is empty.
double auc(std::span<const double> pos_scores, std::span<const double> neg_scores);

// Average precision with pessimistic ties: a negative that ties a positive is ranked
// above it, so a constant scorer earns no credit from ties.
double average_precision(std::span<const double> pos_scores, std::span<const double> neg_scores);

struct RankedQuery {
    double pos_score;
    std::vector<double> neg_scores;
};

// Rank of a positive = 1 + #{neg > pos} + #{neg == pos} / 2 (may be fractional);
// MRR = mean of 1 / rank. Throws MetricError on an empty list.
double mrr(std::span<const RankedQuery> queries);

struct ClassificationScores {
    double accuracy;
    double macro_f1;
};

// Macro-F1 averages over every class that appears in truth or predictions.
ClassificationScores classification_scores(std::span<const std::int32_t> truth,
                                           std::span<const std::int32_t> predicted);

}  // namespace tg
