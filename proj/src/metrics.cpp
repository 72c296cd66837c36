#include "tg/metrics.hpp"

#include <algorithm>
#include <map>

#include "tg/errors.hpp"

namespace tg {

double auc(std::span<const double> pos_scores, std::span<const double> neg_scores) {
    if (pos_scores.empty() || neg_scores.empty()) throw MetricError("AUC needs positives and negatives");
    std::vector<double> neg(neg_scores.begin(), neg_scores.end());
    std::sort(neg.begin(), neg.end());
    // twice the Mann-Whitney statistic, kept integral so ties land exactly on halves
    std::uint64_t twice_u = 0;
    for (double p : pos_scores) {
        const auto lo = std::lower_bound(neg.begin(), neg.end(), p);
        const auto hi = std::upper_bound(lo, neg.end(), p);
        twice_u += 2 * static_cast<std::uint64_t>(lo - neg.begin()) + static_cast<std::uint64_t>(hi - lo);
    }
    const double pairs = static_cast<double>(pos_scores.size()) * static_cast<double>(neg_scores.size());
    return static_cast<double>(twice_u) / (2.0 * pairs);
}

double average_precision(std::span<const double> pos_scores, std::span<const double> neg_scores) {
    if (pos_scores.empty()) throw MetricError("average precision needs at least one positive");
    struct Item {
        double score;
        bool positive;
    };
    std::vector<Item> items;
    items.reserve(pos_scores.size() + neg_scores.size());
    for (double s : pos_scores) items.push_back({s, true});
    for (double s : neg_scores) items.push_back({s, false});
    // descending score; within a tie negatives come first
    std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
        if (a.score != b.score) return a.score > b.score;
        return !a.positive && b.positive;
    });
    double sum = 0.0;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (!items[i].positive) continue;
        ++hits;
        sum += static_cast<double>(hits) / static_cast<double>(i + 1);
    }
    return sum / static_cast<double>(pos_scores.size());
}

double mrr(std::span<const RankedQuery> queries) {
    if (queries.empty()) throw MetricError("MRR needs at least one query");
    double sum = 0.0;
    for (const RankedQuery& q : queries) {
        std::size_t greater = 0;
        std::size_t ties = 0;
        for (double n : q.neg_scores) {
            greater += n > q.pos_score;
            ties += n == q.pos_score;
        }
        const double rank = 1.0 + static_cast<double>(greater) + static_cast<double>(ties) / 2.0;
        sum += 1.0 / rank;
    }
    return sum / static_cast<double>(queries.size());
}

ClassificationScores classification_scores(std::span<const std::int32_t> truth,
                                           std::span<const std::int32_t> predicted) {
    if (truth.empty()) throw MetricError("no labels to evaluate");
    if (truth.size() != predicted.size()) throw ArgumentError("truth and predictions differ in length");

    struct Counts {
        std::size_t tp = 0, fp = 0, fn = 0;
    };
    std::map<std::int32_t, Counts> per_class;
    std::size_t correct = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (truth[i] == predicted[i]) {
            ++correct;
            ++per_class[truth[i]].tp;
        } else {
            ++per_class[truth[i]].fn;
            ++per_class[predicted[i]].fp;
        }
    }
    double f1_sum = 0.0;
    for (const auto& [label, c] : per_class) {
        const double denom = static_cast<double>(2 * c.tp + c.fp + c.fn);
        f1_sum += denom > 0 ? 2.0 * static_cast<double>(c.tp) / denom : 0.0;
    }
    return {static_cast<double>(correct) / static_cast<double>(truth.size()),
            f1_sum / static_cast<double>(per_class.size())};
}

}  // namespace tg
