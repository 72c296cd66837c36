#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <unordered_set>
#include <utility>
#include <vector>

#include "tg/graph.hpp"
#include "tg/rng.hpp"
#include "tg/types.hpp"

namespace tg {

enum class NegativeStrategy : std::uint8_t { Random, Historical };
enum class NegativeFallback : std::uint8_t { ToRandom, Strict };
// Random strategy: corrupt only the destination of each positive, or draw whole pairs.
enum class Corruption : std::uint8_t { Destination, Pair };

struct NegativeSpec {
    NegativeStrategy strategy = NegativeStrategy::Random;
    std::size_t per_positive = 1;
    std::uint64_t seed = 0;
    NegativeFallback fallback = NegativeFallback::ToRandom;
    Corruption corruption = Corruption::Destination;
};

// Half-open time range [start, end).
struct TimeWindow {
    Timestamp start;
    Timestamp end;
};

using NodePair = std::pair<NodeId, NodeId>;

// Set of node pairs that had at least one EdgeAdd in a time range.
class SeenSet {
public:
    explicit SeenSet(Directionality dir = Directionality::Symmetrized) : dir_(dir) {}

    void insert(NodeId u, NodeId v) { pairs_.insert(make_pair_key(u, v, dir_)); }
    bool contains(NodeId u, NodeId v) const { return pairs_.count(make_pair_key(u, v, dir_)) != 0; }
    bool contains_key(PairKey key) const { return pairs_.count(key) != 0; }
    std::size_t size() const noexcept { return pairs_.size(); }
    bool empty() const noexcept { return pairs_.empty(); }
    Directionality directionality() const noexcept { return dir_; }
    const std::unordered_set<PairKey>& keys() const noexcept { return pairs_; }

    // Pairs in ascending key order.
    std::vector<NodePair> sorted_pairs() const;

private:
    Directionality dir_;
    std::unordered_set<PairKey> pairs_;
};

// Pairs with an EdgeAdd at t in [range.start, range.end). Throws ArgumentError if start > end.
SeenSet build_seen_set(const TemporalGraph& g, TimeWindow range, Directionality dir = Directionality::Symmetrized);

struct NegativeSample {
    std::vector<NodePair> pairs;
    // Random: owning positive index per pair. Historical: empty.
    std::vector<std::size_t> owner;
    bool saturated = false;      // rejection cap reached for some positive
    bool shortfall = false;      // historical pool smaller than requested
    std::size_t topped_up = 0;   // random pairs added to fill a historical shortfall
};

// For each positive (u, .), up to Q distinct (u, v') with no EdgeAdd before window.end,
// v' != u and (u, v') not a positive of the window. `history` must hold every pair with an
// EdgeAdd at t < window.end. Gives up on a positive after 1000 * Q rejections.
NegativeSample random_negatives(std::size_t num_nodes, const SeenSet& history, std::span<const NodePair> positives,
                                std::size_t per_positive, CounterRng& rng,
                                Corruption corruption = Corruption::Destination);

// Convenience overload that builds the history set from g.
NegativeSample random_negatives(const TemporalGraph& g, TimeWindow window, std::span<const NodePair> positives,
                                std::size_t per_positive, CounterRng& rng,
                                Directionality dir = Directionality::Symmetrized,
                                Corruption corruption = Corruption::Destination);

// Uniform draws without replacement from the pairs seen in [t_min, window.start) minus the
// pairs seen in the window. On a short pool, ToRandom tops up with whole-pair random
// negatives and Strict returns the pool with shortfall set.
// `past` = pairs seen before window.start, `current` = pairs seen inside the window, and
// `history` = pairs seen before window.end (used only for topping up).
NegativeSample historical_negatives(std::size_t num_nodes, const SeenSet& past, const SeenSet& current,
                                    const SeenSet& history, std::size_t total, CounterRng& rng,
                                    NegativeFallback fallback);

// Convenience overload that builds the three sets from g. Throws ArgumentError if
// window.start < t_min.
NegativeSample historical_negatives(const TemporalGraph& g, TimeWindow window, std::size_t total, CounterRng& rng,
                                    NegativeFallback fallback, Directionality dir = Directionality::Symmetrized);

// Draws negatives for consecutive chronological windows of one graph, keeping the
// "seen before" sets incremental. Window b uses CounterRng(spec.seed, b). Windows must be
// passed with non-decreasing bounds. Historical negatives are assigned to positives
// round-robin in `owner`.
class StreamingNegativeSampler {
public:
    StreamingNegativeSampler(const TemporalGraph& g, NegativeSpec spec,
                             Directionality dir = Directionality::Symmetrized);

    NegativeSample draw(TimeWindow window, std::span<const NodePair> positives, std::size_t window_index);

private:
    void absorb(std::size_t& cursor, SeenSet& set, Timestamp bound);

    const TemporalGraph* g_;
    NegativeSpec spec_;
    Directionality dir_;
    SeenSet past_;     // EdgeAdds before the current window start
    SeenSet history_;  // EdgeAdds before the current window end
    std::size_t past_cursor_ = 0;
    std::size_t history_cursor_ = 0;
};

}  // namespace tg
