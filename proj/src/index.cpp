#include "tg/index.hpp"

#include <algorithm>
#include <string>

#include "tg/errors.hpp"

namespace tg {

namespace {

const AdjEntry* first_at_or_after(std::span<const AdjEntry> list, Timestamp t) {
    return std::lower_bound(list.data(), list.data() + list.size(), t,
                            [](const AdjEntry& e, Timestamp bound) { return e.t < bound; });
}

}  // namespace

TemporalAdjacency build_index(const TemporalGraph& g, Directionality dir) {
    TemporalAdjacency idx;
    idx.dir_ = dir;
    const std::size_t n = g.num_nodes();
    std::vector<std::size_t> degree(n, 0);

    const bool symmetric = dir == Directionality::Symmetrized;
    for (const Event& e : g.events()) {
        if (e.kind != EventKind::EdgeAdd) continue;
        ++degree[e.src];
        if (symmetric && *e.dst != e.src) ++degree[*e.dst];
    }

    idx.offsets_.assign(n + 1, 0);
    for (std::size_t u = 0; u < n; ++u) idx.offsets_[u + 1] = idx.offsets_[u] + degree[u];
    idx.entries_.resize(idx.offsets_[n]);

    // events are already in (t, id) order, so filling in stream order keeps every list sorted
    std::vector<std::size_t> cursor(idx.offsets_.begin(), idx.offsets_.end() - 1);
    for (const Event& e : g.events()) {
        if (e.kind != EventKind::EdgeAdd) continue;
        const NodeId v = *e.dst;
        idx.entries_[cursor[e.src]++] = {v, e.t, e.id};
        if (symmetric && v != e.src) idx.entries_[cursor[v]++] = {e.src, e.t, e.id};
    }
    return idx;
}

void TemporalAdjacency::check(NodeId u) const {
    if (u >= num_nodes())
        throw BoundsError("node " + std::to_string(u) + " out of range [0, " + std::to_string(num_nodes()) + ")");
}

std::span<const AdjEntry> TemporalAdjacency::neighbors(NodeId u) const {
    check(u);
    return std::span<const AdjEntry>(entries_).subspan(offsets_[u], offsets_[u + 1] - offsets_[u]);
}

std::span<const AdjEntry> TemporalAdjacency::neighbors_before(NodeId u, Timestamp t) const {
    const auto list = neighbors(u);
    const AdjEntry* end = first_at_or_after(list, t);
    return {list.data(), static_cast<std::size_t>(end - list.data())};
}

std::span<const AdjEntry> TemporalAdjacency::neighbors_in_window(NodeId u, Timestamp t, Duration w) const {
    if (!(w > 0)) throw ArgumentError("window must be positive");
    const auto before = neighbors_before(u, t);
    const AdjEntry* begin = first_at_or_after(before, t - w);
    return {begin, static_cast<std::size_t>(before.data() + before.size() - begin)};
}

std::optional<Timestamp> TemporalAdjacency::last_event_time(NodeId u, Timestamp t) const {
    const auto before = neighbors_before(u, t);
    if (before.empty()) return std::nullopt;
    return before.back().t;
}

}  // namespace tg
