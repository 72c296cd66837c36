#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "tg/types.hpp"

namespace tg {

// One input row before id remapping.
struct RawEventRecord {
    std::string src;
    std::optional<std::string> dst;
    Timestamp t = 0.0;
    EventKind kind = EventKind::EdgeAdd;
    std::optional<std::int32_t> label;
    std::optional<std::uint64_t> feature_ref;
};

// Bidirectional raw-id <-> dense-id mapping, dense ids assigned in first-appearance order.
class IdVocabulary {
public:
    NodeId intern(const std::string& raw);
    std::optional<NodeId> find(const std::string& raw) const;
    const std::string& to_raw(NodeId id) const { return raw_.at(id); }
    NodeId to_dense(const std::string& raw) const;
    std::size_t size() const noexcept { return raw_.size(); }
    const std::vector<std::string>& raw_ids() const noexcept { return raw_; }

    // Vocabulary whose raw ids are the decimal strings "0".."n-1".
    static IdVocabulary identity(std::size_t n);

    friend bool operator==(const IdVocabulary& a, const IdVocabulary& b) { return a.raw_ == b.raw_; }

private:
    std::vector<std::string> raw_;
    std::unordered_map<std::string, NodeId> dense_;
};

// Chronologically ordered event store. Immutable once built.
class TemporalGraph {
public:
    TemporalGraph() = default;

    std::size_t num_nodes() const noexcept { return num_nodes_; }
    std::size_t num_events() const noexcept { return events_.size(); }
    bool empty() const noexcept { return events_.empty(); }
    std::span<const Event> events() const noexcept { return events_; }
    const Event& event(std::size_t position) const { return events_.at(position); }

    // Undefined (0.0) for an empty graph; check empty() first.
    Timestamp t_min() const noexcept { return t_min_; }
    Timestamp t_max() const noexcept { return t_max_; }

    const IdVocabulary& vocabulary() const noexcept { return vocab_; }

    // Events with t < horizon form a prefix of events(); returns its length.
    std::size_t prefix_before(Timestamp horizon) const noexcept;

    friend bool operator==(const TemporalGraph&, const TemporalGraph&) = default;

private:
    friend TemporalGraph ingest_events(std::span<const RawEventRecord>);
    friend TemporalGraph make_graph(std::size_t, std::vector<Event>, std::optional<IdVocabulary>);

    std::size_t num_nodes_ = 0;
    std::vector<Event> events_;
    Timestamp t_min_ = 0.0;
    Timestamp t_max_ = 0.0;
    IdVocabulary vocab_;
};

// Remaps raw ids by first appearance, then stable-sorts by (t, ingestion order).
// Throws IngestError for a non-finite timestamp or an edge event without dst.
TemporalGraph ingest_events(std::span<const RawEventRecord> records);

// Builds a graph from already-dense events. Event ids are reassigned to input
// positions; the result is sorted by (t, id). Without a vocabulary the identity
// vocabulary over num_nodes is used.
TemporalGraph make_graph(std::size_t num_nodes, std::vector<Event> events,
                         std::optional<IdVocabulary> vocabulary = std::nullopt);

enum class FindingKind { DeleteBeforeAdd, EventOnDeletedNode, DuplicateEvent };

struct ValidationFinding {
    FindingKind kind;
    EventId event_id;
    std::string message;
};

struct ValidationReport {
    std::vector<ValidationFinding> findings;

    bool clean() const noexcept { return findings.empty(); }
    std::size_t count(FindingKind kind) const noexcept;
};

// Advisory scan; never modifies the graph. Delete-before-add matching follows dir.
ValidationReport validate(const TemporalGraph& g, Directionality dir = Directionality::Symmetrized);

}  // namespace tg
