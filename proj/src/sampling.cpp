#include "tg/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "tg/errors.hpp"

namespace tg {

SamplingStrategy uniform_in_window(Duration window) {
    if (!(window > 0)) throw ArgumentError("uniform sampling window must be positive");
    return UniformInWindow{window};
}

namespace {

// Robert Floyd's subset sampling: k distinct indices from [0, n), returned sorted.
std::vector<std::size_t> choose_distinct(std::size_t n, std::size_t k, CounterRng& rng) {
    std::vector<std::size_t> chosen;
    chosen.reserve(k);
    for (std::size_t j = n - k; j < n; ++j) {
        const auto r = static_cast<std::size_t>(rng.uniform_below(j + 1));
        if (std::find(chosen.begin(), chosen.end(), r) == chosen.end())
            chosen.push_back(r);
        else
            chosen.push_back(j);
    }
    std::sort(chosen.begin(), chosen.end());
    return chosen;
}

void append_sample(const TemporalAdjacency& idx, NodeId u, Timestamp t, std::size_t k,
                   const SamplingStrategy& strategy, CounterRng& rng, std::vector<AdjEntry>& out) {
    if (const auto* uniform = std::get_if<UniformInWindow>(&strategy)) {
        const auto candidates = idx.neighbors_in_window(u, t, uniform->window);
        if (candidates.size() <= k) {
            out.insert(out.end(), candidates.begin(), candidates.end());
            return;
        }
        for (std::size_t i : choose_distinct(candidates.size(), k, rng)) out.push_back(candidates[i]);
        return;
    }
    // lists are sorted by (t, event_id), so the newest k sit at the tail
    const auto candidates = idx.neighbors_before(u, t);
    const std::size_t take = std::min(k, candidates.size());
    for (std::size_t i = 0; i < take; ++i) out.push_back(candidates[candidates.size() - 1 - i]);
}

}  // namespace

std::vector<AdjEntry> sample_neighbors(const TemporalAdjacency& idx, NodeId u, Timestamp t, std::size_t k,
                                       const SamplingStrategy& strategy, CounterRng& rng) {
    if (k == 0) throw ArgumentError("k must be at least 1");
    std::vector<AdjEntry> out;
    append_sample(idx, u, t, k, strategy, rng, out);
    return out;
}

std::size_t TemporalBatch::num_edges() const noexcept {
    std::size_t total = 0;
    for (const auto& hop : hops) total += hop.size();
    return total;
}

TemporalBatch sample_khop(const TemporalAdjacency& idx, std::span<const SeedQuery> seeds,
                          std::span<const std::size_t> fanouts, const SamplingStrategy& strategy,
                          std::uint64_t rng_seed, const KHopOptions& options) {
    if (fanouts.empty()) throw ArgumentError("fanouts must be non-empty");
    if (std::any_of(fanouts.begin(), fanouts.end(), [](std::size_t f) { return f == 0; }))
        throw ArgumentError("every fanout must be at least 1");

    TemporalBatch batch;
    batch.seeds.assign(seeds.begin(), seeds.end());
    batch.fanouts.assign(fanouts.begin(), fanouts.end());
    batch.hops.resize(fanouts.size());

    std::unordered_map<NodeId, std::uint32_t> local_of;
    auto local_id = [&](NodeId global) {
        auto [it, inserted] = local_of.try_emplace(global, static_cast<std::uint32_t>(batch.node_map.size()));
        if (inserted) batch.node_map.push_back(global);
        return it->second;
    };
    for (const SeedQuery& s : seeds) {
        idx.neighbors(s.node);  // bounds check before any expansion
        local_id(s.node);
    }

    struct Frontier {
        NodeId node;
        Timestamp query_t;
    };
    std::vector<Frontier> frontier;
    std::vector<Frontier> next;
    std::vector<AdjEntry> sampled;

    for (std::size_t s = 0; s < seeds.size(); ++s) {
        frontier.assign(1, {seeds[s].node, seeds[s].t});
        for (std::size_t h = 0; h < fanouts.size() && !frontier.empty(); ++h) {
            CounterRng rng(rng_seed, static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(h));
            next.clear();
            for (const Frontier& f : frontier) {
                sampled.clear();
                append_sample(idx, f.node, f.query_t, fanouts[h], strategy, rng, sampled);
                const std::uint32_t src = local_of.at(f.node);
                for (const AdjEntry& e : sampled) {
                    batch.hops[h].push_back(
                        {src, local_id(e.neighbor), e.t, e.event_id, static_cast<std::uint32_t>(s), f.query_t});
                    const Timestamp bound = options.time_bound == TimeBound::SeedTime ? seeds[s].t : e.t;
                    next.push_back({e.neighbor, bound});
                }
            }
            // expand each (node, bound) once per seed and hop
            std::sort(next.begin(), next.end(), [](const Frontier& a, const Frontier& b) {
                return a.node != b.node ? a.node < b.node : a.query_t < b.query_t;
            });
            next.erase(std::unique(next.begin(), next.end(),
                                   [](const Frontier& a, const Frontier& b) {
                                       return a.node == b.node && a.query_t == b.query_t;
                                   }),
                       next.end());
            std::swap(frontier, next);
        }
    }
    return batch;
}

std::vector<LinkWindow> slice_link_windows(const TemporalGraph& g, std::span<const std::size_t> positions,
                                           std::size_t batch_size) {
    if (batch_size == 0) throw ArgumentError("batch_size must be at least 1");
    std::vector<LinkWindow> windows;
    for (std::size_t begin = 0; begin < positions.size(); begin += batch_size) {
        const std::size_t end = std::min(positions.size(), begin + batch_size);
        LinkWindow w;
        w.positions.assign(positions.begin() + static_cast<std::ptrdiff_t>(begin),
                           positions.begin() + static_cast<std::ptrdiff_t>(end));
        w.t_start = g.event(w.positions.front()).t;
        w.t_end = std::nextafter(g.event(w.positions.back()).t, std::numeric_limits<double>::infinity());
        windows.push_back(std::move(w));
    }
    return windows;
}

std::vector<LinkWindow> iterate_link_batches(const TemporalGraph& g, std::size_t batch_size) {
    std::vector<std::size_t> positions;
    const auto events = g.events();
    for (std::size_t i = 0; i < events.size(); ++i)
        if (events[i].kind == EventKind::EdgeAdd) positions.push_back(i);
    return slice_link_windows(g, positions, batch_size);
}

}  // namespace tg
