#include "tg/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <unordered_map>

#include "tg/errors.hpp"
#include "tg/metrics.hpp"
#include "tg/sampling.hpp"
#include "tg/text.hpp"

namespace tg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::size_t quantile_index(double fraction, std::size_t n) {
    const auto idx = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n) - 1e-9));
    return std::min(idx, n - 1);
}

}  // namespace

SplitResult chronological_split(const TemporalGraph& g, const SplitSpec& spec) {
    if (!(spec.train > 0 && spec.val > 0 && spec.test > 0))
        throw ArgumentError("split ratios must all be positive");
    if (std::abs(spec.train + spec.val + spec.test - 1.0) > 1e-9)
        throw ArgumentError("split ratios must sum to 1");

    std::vector<Timestamp> times;
    for (const Event& e : g.events())
        if (e.kind == EventKind::EdgeAdd) times.push_back(e.t);
    if (times.size() < 3) throw SplitError("a split needs at least 3 edge additions");
    if (times.front() == times.back()) throw SplitError("all edge additions share one timestamp");

    SplitResult r;
    const std::size_t n = times.size();
    r.t_train_end = times[quantile_index(spec.train, n)];
    r.t_val_end = times[quantile_index(spec.train + spec.val, n)];

    std::unordered_map<NodeId, Timestamp> first_add;
    const auto events = g.events();
    r.tags.reserve(events.size());
    for (std::size_t i = 0; i < events.size(); ++i) {
        const Event& e = events[i];
        const SplitTag tag = e.t < r.t_train_end ? SplitTag::Train
                             : e.t < r.t_val_end ? SplitTag::Val
                                                 : SplitTag::Test;
        r.tags.push_back(tag);
        if (e.kind != EventKind::EdgeAdd) continue;
        first_add.try_emplace(e.src, e.t);
        first_add.try_emplace(*e.dst, e.t);
        if (tag == SplitTag::Test) {
            r.test_positions.push_back(i);
            const bool unseen = !(first_add.at(e.src) < r.t_val_end) || !(first_add.at(*e.dst) < r.t_val_end);
            r.test_unseen.push_back(unseen ? 1 : 0);
        }
    }
    return r;
}

double StagedLinkScorer::score(const HistoryView& history, NodeId u, NodeId v, Timestamp t) {
    const auto time_u = time_(history, u, t);
    const auto graph_u = graph_(history, u, t);
    const auto time_v = time_(history, v, t);
    const auto graph_v = graph_(history, v, t);
    return decoder_(time_u, graph_u, time_v, graph_v);
}

// ---------------------------------------------------------------------------

std::vector<std::pair<std::string, std::string>> MetricsReport::fields() const {
    auto real = [](const std::optional<double>& x) { return format_real(x.value_or(std::nan(""))); };
    auto count = [](std::size_t x) { return std::to_string(x); };
    if (task == "node") {
        return {{"task", task},
                {"accuracy", real(accuracy)},
                {"macro_f1", real(macro_f1)},
                {"evaluated", count(evaluated)}};
    }
    return {{"task", task},
            {"auc", real(auc)},
            {"average_precision", real(average_precision)},
            {"mrr", real(mrr)},
            {"positives", count(positives)},
            {"negatives_random", count(negatives_random)},
            {"negatives_historical", count(negatives_historical)},
            {"batches", count(batches)},
            {"saturated_batches", count(saturated_batches)},
            {"shortfall_batches", count(shortfall_batches)},
            {"topped_up", count(topped_up)},
            {"unseen_positives", count(unseen_positives)},
            {"unseen_auc", real(unseen_auc)},
            {"unseen_average_precision", real(unseen_average_precision)},
            {"unseen_mrr", real(unseen_mrr)}};
}

std::string MetricsReport::to_key_value() const {
    std::string out;
    for (const auto& [k, v] : fields()) out += k + "=" + v + "\n";
    return out;
}

std::string MetricsReport::csv_header() const {
    std::string out;
    for (const auto& [k, v] : fields()) out += (out.empty() ? "" : ",") + k;
    return out + "\n";
}

std::string MetricsReport::csv_row() const {
    std::string out;
    bool first = true;
    for (const auto& [k, v] : fields()) {
        out += (first ? "" : ",") + v;
        first = false;
    }
    return out + "\n";
}

// ---------------------------------------------------------------------------

namespace {

// Scores accumulated for one slice of positives.
struct LinkScores {
    std::vector<double> pos;
    std::vector<double> neg;
    std::vector<RankedQuery> queries;

    void fill(MetricsReport& report, bool unseen) const {
        std::optional<double> a, ap, m;
        if (!pos.empty() && !neg.empty()) a = tg::auc(pos, neg);
        if (!pos.empty()) ap = tg::average_precision(pos, neg);
        if (!queries.empty()) m = tg::mrr(queries);
        if (unseen) {
            report.unseen_auc = a;
            report.unseen_average_precision = ap;
            report.unseen_mrr = m;
        } else {
            report.auc = a;
            report.average_precision = ap;
            report.mrr = m;
        }
    }
};

}  // namespace

MetricsReport evaluate_link_prediction(const TemporalGraph& g, const SplitResult& split, LinkScorer& scorer,
                                       const NegativeSpec& negatives, const LinkEvalOptions& options) {
    MetricsReport report;
    report.task = "link";
    const TemporalAdjacency idx = build_index(g, options.directionality);
    const auto windows = slice_link_windows(g, split.test_positions, options.batch_size);

    std::unordered_map<std::size_t, bool> unseen_at;
    for (std::size_t i = 0; i < split.test_positions.size(); ++i)
        unseen_at[split.test_positions[i]] = split.test_unseen[i] != 0;

    StreamingNegativeSampler sampler(g, negatives, options.directionality);
    LinkScores all;
    LinkScores unseen;

    for (std::size_t b = 0; b < windows.size(); ++b) {
        const LinkWindow& w = windows[b];
        const HistoryView view(g, idx, w.t_start);
        scorer.advance(view);

        std::vector<NodePair> positives;
        for (std::size_t pos : w.positions) positives.emplace_back(g.event(pos).src, *g.event(pos).dst);

        const NegativeSample sample = sampler.draw({w.t_start, w.t_end}, positives, b);
        const std::vector<std::size_t>& owner = sample.owner;
        if (negatives.strategy == NegativeStrategy::Random) {
            report.negatives_random += sample.pairs.size();
        } else {
            report.negatives_historical += sample.pairs.size() - sample.topped_up;
            report.negatives_random += sample.topped_up;
        }
        report.saturated_batches += sample.saturated;
        report.shortfall_batches += sample.shortfall;
        report.topped_up += sample.topped_up;
        ++report.batches;

        std::vector<RankedQuery> queries(positives.size());
        for (std::size_t p = 0; p < positives.size(); ++p) {
            const Event& e = g.event(w.positions[p]);
            queries[p].pos_score = scorer.score(view, e.src, *e.dst, e.t);
        }
        for (std::size_t j = 0; j < sample.pairs.size(); ++j) {
            const Event& e = g.event(w.positions[owner[j]]);
            queries[owner[j]].neg_scores.push_back(scorer.score(view, sample.pairs[j].first, sample.pairs[j].second, e.t));
        }

        for (std::size_t p = 0; p < positives.size(); ++p) {
            const bool is_unseen = unseen_at.at(w.positions[p]);
            for (LinkScores* slice : {&all, is_unseen ? &unseen : nullptr}) {
                if (!slice) continue;
                slice->pos.push_back(queries[p].pos_score);
                slice->neg.insert(slice->neg.end(), queries[p].neg_scores.begin(), queries[p].neg_scores.end());
                if (!queries[p].neg_scores.empty()) slice->queries.push_back(queries[p]);
            }
            report.unseen_positives += is_unseen;
        }
        report.positives += positives.size();
    }
    all.fill(report, false);
    unseen.fill(report, true);
    return report;
}

// ---------------------------------------------------------------------------

std::optional<std::int32_t> LabelHistory::last_label(NodeId node) const {
    auto key_less = [](const NodeLabel& a, const NodeLabel& b) {
        if (a.node != b.node) return a.node < b.node;
        return a.t.value_or(-kInf) < b.t.value_or(-kInf);
    };
    // first label of the node at or after the horizon
    const NodeLabel probe{node, horizon_, 0};
    auto it = std::lower_bound(labels_.begin(), labels_.end(), probe, key_less);
    if (it == labels_.begin()) return std::nullopt;
    --it;
    if (it->node != node) return std::nullopt;
    return it->label;
}

namespace {

std::int32_t majority_of(const std::vector<std::int32_t>& labels) {
    std::map<std::int32_t, std::size_t> counts;
    for (auto l : labels) ++counts[l];
    std::int32_t best = 0;
    std::size_t best_count = 0;
    for (const auto& [label, c] : counts) {
        if (c > best_count) {
            best = label;
            best_count = c;
        }
    }
    return best;
}

void sort_labels(std::vector<NodeLabel>& labels) {
    std::stable_sort(labels.begin(), labels.end(), [](const NodeLabel& a, const NodeLabel& b) {
        if (a.node != b.node) return a.node < b.node;
        return a.t.value_or(-kInf) < b.t.value_or(-kInf);
    });
}

}  // namespace

MetricsReport evaluate_node_classification(const TemporalGraph& g, std::span<const NodeLabel> labels,
                                           const SplitResult& split, NodeClassifier& classifier, bool dynamic) {
    const TemporalAdjacency idx = build_index(g);
    std::vector<std::int32_t> truth;
    std::vector<std::int32_t> predicted;

    if (dynamic) {
        std::vector<NodeLabel> sorted(labels.begin(), labels.end());
        for (const auto& l : sorted)
            if (!l.t) throw ArgumentError("dynamic node classification needs timed labels");
        sort_labels(sorted);
        std::vector<std::int32_t> train;
        for (const auto& l : sorted)
            if (*l.t < split.t_train_end) train.push_back(l.label);
        const std::int32_t majority = majority_of(train);

        std::vector<NodeLabel> queries;
        for (const auto& l : labels)
            if (*l.t >= split.t_val_end) queries.push_back(l);
        std::stable_sort(queries.begin(), queries.end(),
                         [](const NodeLabel& a, const NodeLabel& b) { return *a.t < *b.t; });
        for (const auto& q : queries) {
            const HistoryView view(g, idx, *q.t);
            const LabelHistory history(sorted, *q.t, majority);
            truth.push_back(q.label);
            predicted.push_back(classifier.predict(view, history, q.node, *q.t));
        }
    } else {
        std::vector<Timestamp> first_seen(g.num_nodes(), kInf);
        for (const Event& e : g.events()) {
            first_seen[e.src] = std::min(first_seen[e.src], e.t);
            if (e.dst) first_seen[*e.dst] = std::min(first_seen[*e.dst], e.t);
        }
        std::vector<NodeLabel> known;
        std::vector<NodeLabel> queries;
        std::vector<std::int32_t> train;
        for (const auto& l : labels) {
            const Timestamp seen = l.node < first_seen.size() ? first_seen[l.node] : kInf;
            if (seen < split.t_val_end) {
                known.push_back({l.node, std::nullopt, l.label});
                if (seen < split.t_train_end) train.push_back(l.label);
            } else {
                queries.push_back(l);
            }
        }
        sort_labels(known);
        const std::int32_t majority = majority_of(train);
        const HistoryView view(g, idx, kInf);
        const LabelHistory history(known, kInf, majority);
        for (const auto& q : queries) {
            truth.push_back(q.label);
            predicted.push_back(classifier.predict(view, history, q.node, kInf));
        }
    }

    if (truth.empty()) throw MetricError("node classification has nothing to evaluate");
    const auto scores = classification_scores(truth, predicted);
    MetricsReport report;
    report.task = "node";
    report.accuracy = scores.accuracy;
    report.macro_f1 = scores.macro_f1;
    report.evaluated = truth.size();
    return report;
}

std::vector<NodeLabel> labels_from_events(const TemporalGraph& g, bool dynamic) {
    std::vector<NodeLabel> out;
    if (dynamic) {
        for (const Event& e : g.events())
            if (e.label) out.push_back({e.src, e.t, *e.label});
        return out;
    }
    std::vector<std::optional<std::int32_t>> last(g.num_nodes());
    for (const Event& e : g.events())
        if (e.label) last[e.src] = e.label;
    for (NodeId u = 0; u < last.size(); ++u)
        if (last[u]) out.push_back({u, std::nullopt, *last[u]});
    return out;
}

}  // namespace tg
