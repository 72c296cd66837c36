#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "tg/graph.hpp"
#include "tg/index.hpp"
#include "tg/rng.hpp"

namespace tg {

// Uniform draw without replacement from entries with t' in [t - window, t).
struct UniformInWindow {
    Duration window;
};

// The k entries with the largest t' < t.
struct MostRecent {};

using SamplingStrategy = std::variant<UniformInWindow, MostRecent>;

// Throws ArgumentError when a uniform window is not positive.
SamplingStrategy uniform_in_window(Duration window);

// Which query time a hop-h expansion uses.
enum class TimeBound : std::uint8_t {
    SeedTime,  // the originating seed's query time, for every hop
    EdgeTime,  // the timestamp of the edge that reached the node
};

// Result size is min(k, candidates); never padded. MostRecent output is ordered
// newest first (ties: larger event id first); Uniform output is in time order.
std::vector<AdjEntry> sample_neighbors(const TemporalAdjacency& idx, NodeId u, Timestamp t, std::size_t k,
                                       const SamplingStrategy& strategy, CounterRng& rng);

struct SeedQuery {
    NodeId node;
    Timestamp t;

    friend bool operator==(const SeedQuery&, const SeedQuery&) = default;
};

struct BatchEdge {
    std::uint32_t local_src;  // frontier node being expanded
    std::uint32_t local_dst;  // sampled neighbor
    Timestamp t;
    EventId event_id;
    std::uint32_t seed;  // index into TemporalBatch::seeds
    Timestamp query_t;   // time bound the edge was sampled under

    friend bool operator==(const BatchEdge&, const BatchEdge&) = default;
};

struct TemporalBatch {
    std::vector<SeedQuery> seeds;
    std::vector<std::vector<BatchEdge>> hops;
    std::vector<NodeId> node_map;  // local id -> global id
    std::vector<std::size_t> fanouts;

    std::size_t num_edges() const noexcept;

    friend bool operator==(const TemporalBatch&, const TemporalBatch&) = default;
};

struct KHopOptions {
    TimeBound time_bound = TimeBound::SeedTime;
};

// k-hop expansion, one hop per fanout. Randomness for seed i at hop h comes from
// CounterRng(rng_seed, i, h), so the result does not depend on processing order.
// Throws ArgumentError for empty fanouts or a zero fanout.
TemporalBatch sample_khop(const TemporalAdjacency& idx, std::span<const SeedQuery> seeds,
                          std::span<const std::size_t> fanouts, const SamplingStrategy& strategy,
                          std::uint64_t rng_seed, const KHopOptions& options = {});

// A chronological slice of EdgeAdd events.
struct LinkWindow {
    std::vector<std::size_t> positions;  // indices into TemporalGraph::events()
    Timestamp t_start;                   // first event time
    Timestamp t_end;                     // just above the last event time
};

// Consecutive slices of batch_size EdgeAdd events drawn from the given positions (which
// must be in stream order). Throws ArgumentError when batch_size is zero.
std::vector<LinkWindow> slice_link_windows(const TemporalGraph& g, std::span<const std::size_t> positions,
                                           std::size_t batch_size);

// All EdgeAdd events of g sliced into windows of batch_size.
std::vector<LinkWindow> iterate_link_batches(const TemporalGraph& g, std::size_t batch_size);

}  // namespace tg
