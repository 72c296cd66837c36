#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>

namespace tg {

// Real-valued event time; units are whatever the dataset uses.
using Timestamp = double;
using Duration = double;
using NodeId = std::uint32_t;
// Ingestion ordinal of an event, dense in [0, num_events).
using EventId = std::uint64_t;

enum class EventKind : std::uint8_t {
    EdgeAdd = 0,
    EdgeDelete = 1,
    NodeAdd = 2,
    NodeDelete = 3,
    NodeUpdate = 4,
};

constexpr bool is_edge_event(EventKind kind) noexcept {
    return kind == EventKind::EdgeAdd || kind == EventKind::EdgeDelete;
}

std::string_view to_string(EventKind kind) noexcept;
std::optional<EventKind> parse_event_kind(std::string_view text) noexcept;

struct Event {
    EventId id = 0;
    EventKind kind = EventKind::EdgeAdd;
    NodeId src = 0;
    std::optional<NodeId> dst;
    Timestamp t = 0.0;
    std::optional<std::uint64_t> feature_ref;
    std::optional<std::int32_t> label;

    friend bool operator==(const Event&, const Event&) = default;
};

// Orientation used by the index, seen sets, snapshots and EdgeBank.
enum class Directionality : std::uint8_t { Directed, Symmetrized };

// A node pair packed into 64 bits. Symmetrized pairs are stored as (min, max).
using PairKey = std::uint64_t;

constexpr PairKey make_pair_key(NodeId u, NodeId v, Directionality dir) noexcept {
    if (dir == Directionality::Symmetrized && v < u) std::swap(u, v);
    return (static_cast<PairKey>(u) << 32) | static_cast<PairKey>(v);
}

constexpr std::pair<NodeId, NodeId> unpack_pair_key(PairKey key) noexcept {
    return {static_cast<NodeId>(key >> 32), static_cast<NodeId>(key & 0xffffffffu)};
}

}  // namespace tg
