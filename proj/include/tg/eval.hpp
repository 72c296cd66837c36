#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tg/edgebank.hpp"
#include "tg/graph.hpp"
#include "tg/index.hpp"
#include "tg/negatives.hpp"

namespace tg {

// ---------------------------------------------------------------------------
// Chronological split

struct SplitSpec {
    double train = 0.70;
    double val = 0.15;
    double test = 0.15;
};

enum class SplitTag : std::uint8_t { Train, Val, Test };

struct SplitResult {
    Timestamp t_train_end = 0.0;
    Timestamp t_val_end = 0.0;
    std::vector<SplitTag> tags;                // per event position
    std::vector<std::size_t> test_positions;   // EdgeAdd positions tagged Test, in stream order
    std::vector<std::uint8_t> test_unseen;     // aligned with test_positions
};

// Boundaries are empirical quantiles of EdgeAdd times: with n sorted times,
// t_train_end = times[ceil(train * n)] and t_val_end = times[ceil((train + val) * n)].
// An event is Train if t < t_train_end, Val if t < t_val_end, Test otherwise.
// A test edge is unseen if an endpoint has no EdgeAdd before t_val_end.
// Throws ArgumentError on bad ratios and SplitError with fewer than 3 EdgeAdds or when
// all EdgeAdd timestamps coincide.
SplitResult chronological_split(const TemporalGraph& g, const SplitSpec& spec);

// ---------------------------------------------------------------------------
// Leakage-proof view handed to scorers: nothing at or after the horizon is reachable.

class HistoryView {
public:
    HistoryView(const TemporalGraph& g, const TemporalAdjacency& idx, Timestamp horizon)
        : g_(&g), idx_(&idx), horizon_(horizon) {}

    Timestamp horizon() const noexcept { return horizon_; }
    std::size_t num_nodes() const noexcept { return g_->num_nodes(); }
    std::span<const Event> events() const noexcept { return g_->events().first(g_->prefix_before(horizon_)); }
    std::span<const AdjEntry> neighbors(NodeId u) const { return idx_->neighbors_before(u, horizon_); }

private:
    const TemporalGraph* g_;
    const TemporalAdjacency* idx_;
    Timestamp horizon_;
};

// Scores a candidate link (u, v) at time t using only history.
class LinkScorer {
public:
    virtual ~LinkScorer() = default;
    // Called with non-decreasing horizons before each batch is scored.
    virtual void advance(const HistoryView& history) { (void)history; }
    virtual double score(const HistoryView& history, NodeId u, NodeId v, Timestamp t) = 0;
};

// A scorer built from three stages: a time encoder, a structure encoder run per
// endpoint, and a decoder that combines both into one score.
class StagedLinkScorer : public LinkScorer {
public:
    using TimeEncoder = std::function<std::vector<double>(const HistoryView&, NodeId, Timestamp)>;
    using GraphEncoder = std::function<std::vector<double>(const HistoryView&, NodeId, Timestamp)>;
    using Decoder = std::function<double(std::span<const double> time_u, std::span<const double> graph_u,
                                         std::span<const double> time_v, std::span<const double> graph_v)>;

    StagedLinkScorer(TimeEncoder time, GraphEncoder graph, Decoder decoder)
        : time_(std::move(time)), graph_(std::move(graph)), decoder_(std::move(decoder)) {}

    double score(const HistoryView& history, NodeId u, NodeId v, Timestamp t) override;

private:
    TimeEncoder time_;
    GraphEncoder graph_;
    Decoder decoder_;
};

class EdgeBankScorer : public LinkScorer {
public:
    explicit EdgeBankScorer(EdgeBank bank) : bank_(std::move(bank)) {}

    void advance(const HistoryView& history) override { bank_.advance(history.events(), history.horizon()); }
    double score(const HistoryView&, NodeId u, NodeId v, Timestamp) override { return bank_.score(u, v); }

    const EdgeBank& bank() const noexcept { return bank_; }

private:
    EdgeBank bank_;
};

// ---------------------------------------------------------------------------
// Reports

struct MetricsReport {
    std::string task;
    // link prediction
    std::optional<double> auc;
    std::optional<double> average_precision;
    std::optional<double> mrr;
    std::size_t positives = 0;
    std::size_t negatives_random = 0;
    std::size_t negatives_historical = 0;
    std::size_t batches = 0;
    std::size_t saturated_batches = 0;
    std::size_t shortfall_batches = 0;
    std::size_t topped_up = 0;
    std::size_t unseen_positives = 0;
    std::optional<double> unseen_auc;
    std::optional<double> unseen_average_precision;
    std::optional<double> unseen_mrr;
    // node classification
    std::optional<double> accuracy;
    std::optional<double> macro_f1;
    std::size_t evaluated = 0;

    // Ordered (key, value) pairs; absent metrics are written as "nan".
    std::vector<std::pair<std::string, std::string>> fields() const;
    // "key=value" lines.
    std::string to_key_value() const;
    std::string csv_header() const;
    std::string csv_row() const;
};

// ---------------------------------------------------------------------------
// Link prediction

struct LinkEvalOptions {
    std::size_t batch_size = 200;
    Directionality directionality = Directionality::Symmetrized;
};

// Streams test EdgeAdds in chronological batches. Per batch: advance the scorer to the
// batch start, draw negatives from the batch's own RNG stream, score positives and
// negatives at the positive's time. Saturation and shortfall become counters.
MetricsReport evaluate_link_prediction(const TemporalGraph& g, const SplitResult& split, LinkScorer& scorer,
                                       const NegativeSpec& negatives, const LinkEvalOptions& options = {});

// ---------------------------------------------------------------------------
// Node classification

struct NodeLabel {
    NodeId node;
    std::optional<Timestamp> t;  // absent for static labels
    std::int32_t label;
};

// Labels visible to a classifier: only those strictly before the horizon.
class LabelHistory {
public:
    LabelHistory(std::span<const NodeLabel> sorted_labels, Timestamp horizon, std::int32_t majority)
        : labels_(sorted_labels), horizon_(horizon), majority_(majority) {}

    // Latest label of `node` with time < horizon (static labels count as -inf).
    std::optional<std::int32_t> last_label(NodeId node) const;
    std::int32_t training_majority() const noexcept { return majority_; }
    Timestamp horizon() const noexcept { return horizon_; }

private:
    std::span<const NodeLabel> labels_;  // sorted by (node, t)
    Timestamp horizon_;
    std::int32_t majority_;
};

class NodeClassifier {
public:
    virtual ~NodeClassifier() = default;
    virtual std::int32_t predict(const HistoryView& history, const LabelHistory& labels, NodeId node,
                                 Timestamp t) = 0;
};

// Predicts the node's most recent past label, else the training-majority class.
class PersistenceClassifier : public NodeClassifier {
public:
    std::int32_t predict(const HistoryView&, const LabelHistory& labels, NodeId node, Timestamp) override {
        return labels.last_label(node).value_or(labels.training_majority());
    }
};

// Static mode: labels carry no time; nodes whose first EdgeAdd is at or after t_val_end
// are evaluated, the rest are known. Dynamic mode: each (node, t) label with
// t >= t_val_end is evaluated at t against labels strictly before t.
// Throws MetricError when nothing is evaluated.
MetricsReport evaluate_node_classification(const TemporalGraph& g, std::span<const NodeLabel> labels,
                                           const SplitResult& split, NodeClassifier& classifier, bool dynamic);

// Labels read from the event stream: dynamic -> (src, t, label) per labeled event;
// static -> each node's last label, untimed.
std::vector<NodeLabel> labels_from_events(const TemporalGraph& g, bool dynamic);

}  // namespace tg
