#include "tg/graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <tuple>
#include <unordered_set>

#include "tg/errors.hpp"

namespace tg {

std::string_view to_string(EventKind kind) noexcept {
    switch (kind) {
        case EventKind::EdgeAdd: return "add";
        case EventKind::EdgeDelete: return "delete";
        case EventKind::NodeAdd: return "node_add";
        case EventKind::NodeDelete: return "node_delete";
        case EventKind::NodeUpdate: return "node_update";
    }
    return "add";
}

std::optional<EventKind> parse_event_kind(std::string_view text) noexcept {
    if (text == "add") return EventKind::EdgeAdd;
    if (text == "delete") return EventKind::EdgeDelete;
    if (text == "node_add") return EventKind::NodeAdd;
    if (text == "node_delete") return EventKind::NodeDelete;
    if (text == "node_update") return EventKind::NodeUpdate;
    return std::nullopt;
}

NodeId IdVocabulary::intern(const std::string& raw) {
    auto [it, inserted] = dense_.try_emplace(raw, static_cast<NodeId>(raw_.size()));
    if (inserted) raw_.push_back(raw);
    return it->second;
}

std::optional<NodeId> IdVocabulary::find(const std::string& raw) const {
    auto it = dense_.find(raw);
    if (it == dense_.end()) return std::nullopt;
    return it->second;
}

NodeId IdVocabulary::to_dense(const std::string& raw) const {
    auto id = find(raw);
    if (!id) throw ArgumentError("unknown raw node id '" + raw + "'");
    return *id;
}

IdVocabulary IdVocabulary::identity(std::size_t n) {
    IdVocabulary vocab;
    vocab.raw_.reserve(n);
    vocab.dense_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) vocab.intern(std::to_string(i));
    return vocab;
}

std::size_t TemporalGraph::prefix_before(Timestamp horizon) const noexcept {
    auto it = std::lower_bound(events_.begin(), events_.end(), horizon,
                               [](const Event& e, Timestamp t) { return e.t < t; });
    return static_cast<std::size_t>(it - events_.begin());
}

namespace {

void sort_chronologically(std::vector<Event>& events) {
    std::stable_sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
        return std::tie(a.t, a.id) < std::tie(b.t, b.id);
    });
}

}  // namespace

TemporalGraph ingest_events(std::span<const RawEventRecord> records) {
    TemporalGraph g;
    g.events_.reserve(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        const RawEventRecord& r = records[i];
        if (!std::isfinite(r.t)) throw IngestError(i, "non-finite timestamp");
        const bool edge = is_edge_event(r.kind);
        if (edge && !r.dst) throw IngestError(i, "edge event without destination");
        if (!edge && r.dst) throw IngestError(i, "node event with a destination");

        Event e;
        e.id = i;
        e.kind = r.kind;
        e.src = g.vocab_.intern(r.src);
        if (r.dst) e.dst = g.vocab_.intern(*r.dst);
        e.t = r.t;
        e.label = r.label;
        e.feature_ref = r.feature_ref;
        g.events_.push_back(e);
    }
    sort_chronologically(g.events_);
    g.num_nodes_ = g.vocab_.size();
    if (!g.events_.empty()) {
        g.t_min_ = g.events_.front().t;
        g.t_max_ = g.events_.back().t;
    }
    return g;
}

TemporalGraph make_graph(std::size_t num_nodes, std::vector<Event> events,
                         std::optional<IdVocabulary> vocabulary) {
    TemporalGraph g;
    for (std::size_t i = 0; i < events.size(); ++i) {
        Event& e = events[i];
        e.id = i;
        if (!std::isfinite(e.t)) throw IngestError(i, "non-finite timestamp");
        if (is_edge_event(e.kind) != e.dst.has_value())
            throw IngestError(i, "destination presence does not match event kind");
        if (e.src >= num_nodes || (e.dst && *e.dst >= num_nodes))
            throw IngestError(i, "node id out of range");
    }
    if (vocabulary && vocabulary->size() != num_nodes)
        throw ArgumentError("vocabulary size does not match node count");
    g.vocab_ = vocabulary ? std::move(*vocabulary) : IdVocabulary::identity(num_nodes);
    g.num_nodes_ = num_nodes;
    g.events_ = std::move(events);
    sort_chronologically(g.events_);
    if (!g.events_.empty()) {
        g.t_min_ = g.events_.front().t;
        g.t_max_ = g.events_.back().t;
    }
    return g;
}

std::size_t ValidationReport::count(FindingKind kind) const noexcept {
    return static_cast<std::size_t>(std::count_if(
        findings.begin(), findings.end(), [kind](const ValidationFinding& f) { return f.kind == kind; }));
}

ValidationReport validate(const TemporalGraph& g, Directionality dir) {
    ValidationReport report;
    std::unordered_set<PairKey> added;
    std::unordered_set<NodeId> deleted;
    std::set<std::tuple<NodeId, NodeId, Timestamp, EventKind>> seen_tuples;

    for (const Event& e : g.events()) {
        const NodeId dst = e.dst.value_or(e.src);
        if (!seen_tuples.emplace(e.src, dst, e.t, e.kind).second) {
            report.findings.push_back({FindingKind::DuplicateEvent, e.id,
                                       "duplicate " + std::string(to_string(e.kind)) + " event"});
        }

        if (e.kind == EventKind::NodeAdd) {
            deleted.erase(e.src);
        } else if (deleted.count(e.src) || (e.dst && deleted.count(*e.dst))) {
            report.findings.push_back({FindingKind::EventOnDeletedNode, e.id,
                                       "event references a deleted node"});
        }

        switch (e.kind) {
            case EventKind::EdgeAdd:
                added.insert(make_pair_key(e.src, dst, dir));
                break;
            case EventKind::EdgeDelete:
                if (!added.count(make_pair_key(e.src, dst, dir)))
                    report.findings.push_back({FindingKind::DeleteBeforeAdd, e.id,
                                               "edge delete without a prior add"});
                break;
            case EventKind::NodeDelete:
                deleted.insert(e.src);
                break;
            default:
                break;
        }
    }
    return report;
}

}  // namespace tg
