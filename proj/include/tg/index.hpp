#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "tg/graph.hpp"
#include "tg/types.hpp"

namespace tg {

struct AdjEntry {
    NodeId neighbor;
    Timestamp t;
    EventId event_id;

    friend bool operator==(const AdjEntry&, const AdjEntry&) = default;
};

// CSR adjacency over EdgeAdd events. Each node's entries are sorted by (t, event_id).
class TemporalAdjacency {
public:
    TemporalAdjacency() = default;

    std::size_t num_nodes() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
    std::size_t num_entries() const noexcept { return entries_.size(); }
    Directionality directionality() const noexcept { return dir_; }
    std::span<const std::size_t> offsets() const noexcept { return offsets_; }

    // Full time-sorted list of u.
    std::span<const AdjEntry> neighbors(NodeId u) const;

    // Entries with t' < t.
    std::span<const AdjEntry> neighbors_before(NodeId u, Timestamp t) const;

    // Entries with t - w <= t' < t. Throws ArgumentError unless w > 0.
    std::span<const AdjEntry> neighbors_in_window(NodeId u, Timestamp t, Duration w) const;

    std::size_t degree_before(NodeId u, Timestamp t) const { return neighbors_before(u, t).size(); }

    // Largest t' < t, if any.
    std::optional<Timestamp> last_event_time(NodeId u, Timestamp t) const;

private:
    friend TemporalAdjacency build_index(const TemporalGraph&, Directionality);

    void check(NodeId u) const;

    std::vector<std::size_t> offsets_;
    std::vector<AdjEntry> entries_;
    Directionality dir_ = Directionality::Symmetrized;
};

// Indexes EdgeAdd events only. Symmetrized mode stores u->v and v->u under the same
// event id; a self-loop is stored once.
TemporalAdjacency build_index(const TemporalGraph& g, Directionality dir = Directionality::Symmetrized);

}  // namespace tg
