#include "tg/negatives.hpp"

#include <algorithm>
#include <limits>

#include "tg/errors.hpp"

namespace tg {

std::vector<NodePair> SeenSet::sorted_pairs() const {
    std::vector<PairKey> keys(pairs_.begin(), pairs_.end());
    std::sort(keys.begin(), keys.end());
    std::vector<NodePair> out;
    out.reserve(keys.size());
    for (PairKey k : keys) out.push_back(unpack_pair_key(k));
    return out;
}

SeenSet build_seen_set(const TemporalGraph& g, TimeWindow range, Directionality dir) {
    if (range.start > range.end) throw ArgumentError("seen-set range start exceeds end");
    SeenSet seen(dir);
    const auto events = g.events();
    for (std::size_t i = g.prefix_before(range.start); i < events.size() && events[i].t < range.end; ++i) {
        const Event& e = events[i];
        if (e.kind == EventKind::EdgeAdd) seen.insert(e.src, *e.dst);
    }
    return seen;
}

namespace {

constexpr std::size_t kRejectionFactor = 1000;

}  // namespace

NegativeSample random_negatives(std::size_t num_nodes, const SeenSet& history, std::span<const NodePair> positives,
                                std::size_t per_positive, CounterRng& rng, Corruption corruption) {
    if (num_nodes < 2) throw ArgumentError("random negatives need at least two nodes");
    if (per_positive == 0) throw ArgumentError("per_positive must be at least 1");

    const Directionality dir = history.directionality();
    std::unordered_set<PairKey> window_positives;
    for (const auto& [u, v] : positives) window_positives.insert(make_pair_key(u, v, dir));

    NegativeSample out;
    std::unordered_set<PairKey> taken;
    for (std::size_t p = 0; p < positives.size(); ++p) {
        taken.clear();
        std::size_t found = 0;
        std::size_t rejections = 0;
        const std::size_t cap = kRejectionFactor * per_positive;
        while (found < per_positive) {
            NodeId u = positives[p].first;
            if (corruption == Corruption::Pair) u = static_cast<NodeId>(rng.uniform_below(num_nodes));
            const auto v = static_cast<NodeId>(rng.uniform_below(num_nodes));
            const PairKey key = make_pair_key(u, v, dir);
            if (u == v || history.contains_key(key) || window_positives.count(key) || !taken.insert(key).second) {
                if (++rejections >= cap) {
                    out.saturated = true;
                    break;
                }
                continue;
            }
            out.pairs.emplace_back(u, v);
            out.owner.push_back(p);
            ++found;
        }
    }
    return out;
}

NegativeSample random_negatives(const TemporalGraph& g, TimeWindow window, std::span<const NodePair> positives,
                                std::size_t per_positive, CounterRng& rng, Directionality dir,
                                Corruption corruption) {
    const SeenSet history = build_seen_set(g, {-std::numeric_limits<double>::infinity(), window.end}, dir);
    return random_negatives(g.num_nodes(), history, positives, per_positive, rng, corruption);
}

NegativeSample historical_negatives(std::size_t num_nodes, const SeenSet& past, const SeenSet& current,
                                    const SeenSet& history, std::size_t total, CounterRng& rng,
                                    NegativeFallback fallback) {
    std::vector<PairKey> pool;
    for (PairKey k : past.keys())
        if (!current.contains_key(k)) pool.push_back(k);
    // hash-set iteration order is unspecified; sort so draws depend only on the seed
    std::sort(pool.begin(), pool.end());

    NegativeSample out;
    const std::size_t take = std::min(total, pool.size());
    // partial Fisher-Yates
    for (std::size_t i = 0; i < take; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.uniform_below(pool.size() - i));
        std::swap(pool[i], pool[j]);
        out.pairs.push_back(unpack_pair_key(pool[i]));
    }
    if (take == total) return out;

    out.shortfall = true;
    if (fallback == NegativeFallback::Strict || num_nodes < 2) return out;

    // top up with whole-pair random negatives; none of them can collide with the pool,
    // because every pool pair is in history
    const std::size_t missing = total - take;
    std::unordered_set<PairKey> taken;
    std::size_t rejections = 0;
    const Directionality dir = history.directionality();
    while (out.pairs.size() < total) {
        const auto u = static_cast<NodeId>(rng.uniform_below(num_nodes));
        const auto v = static_cast<NodeId>(rng.uniform_below(num_nodes));
        const PairKey key = make_pair_key(u, v, dir);
        if (u == v || history.contains_key(key) || !taken.insert(key).second) {
            if (++rejections >= kRejectionFactor * missing) {
                out.saturated = true;
                break;
            }
            continue;
        }
        out.pairs.emplace_back(u, v);
        ++out.topped_up;
    }
    return out;
}

NegativeSample historical_negatives(const TemporalGraph& g, TimeWindow window, std::size_t total, CounterRng& rng,
                                    NegativeFallback fallback, Directionality dir) {
    if (!g.empty() && window.start < g.t_min()) throw ArgumentError("window starts before the first event");
    const double lowest = -std::numeric_limits<double>::infinity();
    const SeenSet past = build_seen_set(g, {lowest, window.start}, dir);
    const SeenSet current = build_seen_set(g, window, dir);
    const SeenSet history = build_seen_set(g, {lowest, window.end}, dir);
    return historical_negatives(g.num_nodes(), past, current, history, total, rng, fallback);
}

StreamingNegativeSampler::StreamingNegativeSampler(const TemporalGraph& g, NegativeSpec spec, Directionality dir)
    : g_(&g), spec_(spec), dir_(dir), past_(dir), history_(dir) {
    if (spec_.per_positive == 0) throw ArgumentError("per_positive must be at least 1");
}

void StreamingNegativeSampler::absorb(std::size_t& cursor, SeenSet& set, Timestamp bound) {
    const auto events = g_->events();
    while (cursor < events.size() && events[cursor].t < bound) {
        const Event& e = events[cursor++];
        if (e.kind == EventKind::EdgeAdd) set.insert(e.src, *e.dst);
    }
}

NegativeSample StreamingNegativeSampler::draw(TimeWindow window, std::span<const NodePair> positives,
                                              std::size_t window_index) {
    CounterRng rng(spec_.seed, static_cast<std::uint32_t>(window_index), 0);
    absorb(history_cursor_, history_, window.end);
    if (spec_.strategy == NegativeStrategy::Random)
        return random_negatives(g_->num_nodes(), history_, positives, spec_.per_positive, rng, spec_.corruption);

    absorb(past_cursor_, past_, window.start);
    const SeenSet current = build_seen_set(*g_, window, dir_);
    NegativeSample out = historical_negatives(g_->num_nodes(), past_, current, history_,
                                              spec_.per_positive * positives.size(), rng, spec_.fallback);
    if (!positives.empty())
        for (std::size_t j = 0; j < out.pairs.size(); ++j) out.owner.push_back(j % positives.size());
    return out;
}

}  // namespace tg
