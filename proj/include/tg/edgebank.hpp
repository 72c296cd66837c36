#pragma once

#include <cstddef>
#include <deque>
#include <limits>
#include <span>
#include <unordered_map>
#include <variant>

#include "tg/graph.hpp"

namespace tg {

struct EdgeBankInfinite {};
struct EdgeBankTimeWindow {
    Duration window;
};
using EdgeBankVariant = std::variant<EdgeBankInfinite, EdgeBankTimeWindow>;

// Memorization predictor: a pair scores 1 if it had an EdgeAdd in the remembered
// range, 0 otherwise. Infinite remembers [-inf, clock); TimeWindow remembers
// [clock - w, clock).
class EdgeBank {
public:
    // Throws ArgumentError for a non-positive window.
    explicit EdgeBank(EdgeBankVariant variant = EdgeBankInfinite{},
                      Directionality dir = Directionality::Symmetrized);

    // Absorbs EdgeAdds with t in [clock, new_clock) from a (t, id)-sorted event stream,
    // evicts stale entries and sets clock = new_clock. Throws ArgumentError if
    // new_clock < clock.
    void advance(std::span<const Event> sorted_events, Timestamp new_clock);
    void advance(const TemporalGraph& g, Timestamp new_clock) { advance(g.events(), new_clock); }

    int score(NodeId u, NodeId v) const;

    Timestamp clock() const noexcept { return clock_; }
    std::size_t memory_size() const noexcept { return last_seen_.size(); }
    const EdgeBankVariant& variant() const noexcept { return variant_; }

private:
    EdgeBankVariant variant_;
    Directionality dir_;
    Timestamp clock_ = -std::numeric_limits<double>::infinity();
    std::unordered_map<PairKey, Timestamp> last_seen_;
    struct Entry {
        PairKey key;
        Timestamp t;
    };
    std::deque<Entry> buffer_;  // time-ordered, TimeWindow only
};

}  // namespace tg
