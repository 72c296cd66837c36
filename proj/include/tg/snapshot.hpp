#pragma once

#include <cstddef>
#include <cstdint>
#include <variant>
#include <vector>

#include "tg/graph.hpp"

namespace tg {

// Windows of width w anchored at t_min; as many as needed to cover t_max.
struct FixedWidth {
    Duration width;
};
// K equal-width windows over [t_min, t_max]; the last is closed at t_max.
struct FixedCount {
    std::size_t count;
};
// Consecutive slices of m events in stream order.
struct FixedEvents {
    std::size_t events;
};

using PartitionMode = std::variant<FixedWidth, FixedCount, FixedEvents>;

// How repeated EdgeAdds between one pair collapse inside a snapshot.
enum class Coalesce : std::uint8_t {
    KeepAll,      // one edge per EdgeAdd
    Last,         // one edge per pair, stamped with the last add
    CountWeight,  // one edge per pair, weight = max(1, adds - deletes)
};

enum class Accumulation : std::uint8_t {
    Interval,    // only events inside the window
    Cumulative,  // every event before the window end
};

struct SnapshotSpec {
    PartitionMode mode = FixedCount{10};
    Coalesce coalesce = Coalesce::CountWeight;
    Accumulation accumulation = Accumulation::Interval;
    Directionality directionality = Directionality::Symmetrized;
};

// Throws ArgumentError on w <= 0, K == 0 or m == 0.
void check_spec(const SnapshotSpec& spec);

struct SnapshotEdge {
    NodeId src;
    NodeId dst;
    double weight;
    // Number of EdgeAdd events this edge expands back into.
    std::uint32_t multiplicity;
    // Representative time: own time (KeepAll), last add (Last, CountWeight).
    Timestamp t;

    friend bool operator==(const SnapshotEdge&, const SnapshotEdge&) = default;
};

struct Snapshot {
    std::size_t index = 0;
    Timestamp start = 0.0;
    Timestamp end = 0.0;
    bool end_inclusive = false;
    std::size_t node_count = 0;
    std::vector<SnapshotEdge> edges;
    // Per-node liveness from NodeAdd/NodeDelete replay; empty when the stream has no
    // node lifecycle events.
    std::vector<std::uint8_t> active;

    friend bool operator==(const Snapshot&, const Snapshot&) = default;
};

// Empty graph -> empty list. Edges are listed in first-appearance order within the
// snapshot. An EdgeDelete removes the pair; a later add restores it.
std::vector<Snapshot> make_snapshots(const TemporalGraph& g, const SnapshotSpec& spec);

// The whole stream collapsed into one snapshot (deletes applied cumulatively).
Snapshot to_static(const TemporalGraph& g, Coalesce coalesce = Coalesce::CountWeight,
                   Directionality dir = Directionality::Symmetrized);

// Edge e of snapshot i becomes e.multiplicity EdgeAdds at t = i.
// Throws ArgumentError if node counts differ.
TemporalGraph snapshots_to_events(const std::vector<Snapshot>& snapshots);

}  // namespace tg
