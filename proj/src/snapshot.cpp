#include "tg/snapshot.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "tg/errors.hpp"

namespace tg {

void check_spec(const SnapshotSpec& spec) {
    if (const auto* w = std::get_if<FixedWidth>(&spec.mode); w && !(w->width > 0))
        throw ArgumentError("snapshot width must be positive");
    if (const auto* c = std::get_if<FixedCount>(&spec.mode); c && c->count == 0)
        throw ArgumentError("snapshot count must be at least 1");
    if (const auto* m = std::get_if<FixedEvents>(&spec.mode); m && m->events == 0)
        throw ArgumentError("events per snapshot must be at least 1");
}

namespace {

struct Partition {
    std::vector<Snapshot> shells;          // bounds only
    std::vector<std::size_t> window_of;    // per event position
};

// Assigns a window to every event. Windows are [start_i, start_{i+1}); the final one is
// extended to hold t_max.
Partition partition_by_bounds(const TemporalGraph& g, std::vector<Timestamp> starts, Timestamp last_end,
                              bool last_inclusive) {
    Partition p;
    const std::size_t count = starts.size();
    p.shells.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        p.shells[i].index = i;
        p.shells[i].start = starts[i];
        p.shells[i].end = i + 1 < count ? starts[i + 1] : last_end;
    }
    p.shells.back().end_inclusive = last_inclusive;

    p.window_of.reserve(g.num_events());
    for (const Event& e : g.events()) {
        // number of starts <= t, minus one; the first start is t_min so this is >= 0
        auto it = std::upper_bound(starts.begin(), starts.end(), e.t);
        p.window_of.push_back(static_cast<std::size_t>(it - starts.begin()) - 1);
    }
    return p;
}

Partition partition(const TemporalGraph& g, const PartitionMode& mode) {
    const Timestamp lo = g.t_min();
    const Timestamp hi = g.t_max();
    if (const auto* fw = std::get_if<FixedWidth>(&mode)) {
        const auto count = static_cast<std::size_t>(std::floor((hi - lo) / fw->width)) + 1;
        std::vector<Timestamp> starts;
        for (std::size_t i = 0; i < count; ++i) starts.push_back(lo + static_cast<double>(i) * fw->width);
        // guard against rounding leaving t_max past the last window
        Timestamp last_end = lo + static_cast<double>(count) * fw->width;
        while (last_end <= hi) {
            starts.push_back(last_end);
            last_end = lo + static_cast<double>(starts.size()) * fw->width;
        }
        return partition_by_bounds(g, std::move(starts), last_end, false);
    }
    if (const auto* fc = std::get_if<FixedCount>(&mode)) {
        const double width = (hi - lo) / static_cast<double>(fc->count);
        std::vector<Timestamp> starts;
        for (std::size_t i = 0; i < fc->count; ++i) starts.push_back(lo + static_cast<double>(i) * width);
        return partition_by_bounds(g, std::move(starts), hi, true);
    }
    const std::size_t m = std::get<FixedEvents>(mode).events;
    const auto events = g.events();
    Partition p;
    const std::size_t count = (events.size() + m - 1) / m;
    p.shells.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        Snapshot& s = p.shells[i];
        s.index = i;
        s.start = events[i * m].t;
        const bool last = i + 1 == count;
        s.end = last ? hi : events[(i + 1) * m].t;
        s.end_inclusive = last;
    }
    for (std::size_t i = 0; i < events.size(); ++i) p.window_of.push_back(i / m);
    return p;
}

// Replays edge events into coalesced per-pair state.
class EdgeAccumulator {
public:
    EdgeAccumulator(Coalesce coalesce, Directionality dir) : coalesce_(coalesce), dir_(dir) {}

    void apply(const Event& e) {
        if (!is_edge_event(e.kind)) return;
        NodeId u = e.src;
        NodeId v = *e.dst;
        if (dir_ == Directionality::Symmetrized && v < u) std::swap(u, v);
        auto [it, inserted] = slot_of_.try_emplace(make_pair_key(u, v, dir_), pairs_.size());
        if (inserted) {
            pairs_.emplace_back();
            pairs_.back().u = u;
            pairs_.back().v = v;
        }
        PairState& st = pairs_[it->second];

        if (e.kind == EventKind::EdgeAdd) {
            st.present = true;
            ++st.adds;
            st.last_t = e.t;
            if (coalesce_ == Coalesce::KeepAll) {
                st.kept.push_back(kept_.size());
                kept_.push_back({it->second, e.t, true});
            }
            return;
        }
        st.present = false;
        ++st.deletes;
        for (std::size_t k : st.kept) kept_[k].alive = false;
        st.kept.clear();
    }

    std::vector<SnapshotEdge> edges() const {
        std::vector<SnapshotEdge> out;
        if (coalesce_ == Coalesce::KeepAll) {
            for (const Kept& k : kept_) {
                if (!k.alive) continue;
                out.push_back({pairs_[k.slot].u, pairs_[k.slot].v, 1.0, 1, k.t});
            }
            return out;
        }
        // pairs_ is already in first-appearance order
        for (const PairState& st : pairs_) {
            if (!st.present) continue;
            if (coalesce_ == Coalesce::Last) {
                out.push_back({st.u, st.v, 1.0, 1, st.last_t});
                continue;
            }
            const long net = static_cast<long>(st.adds) - static_cast<long>(st.deletes);
            const auto weight = static_cast<std::uint32_t>(std::max(1L, net));
            out.push_back({st.u, st.v, static_cast<double>(weight), weight, st.last_t});
        }
        return out;
    }

private:
    struct PairState {
        NodeId u;
        NodeId v;
        bool present = false;
        std::size_t adds = 0;
        std::size_t deletes = 0;
        Timestamp last_t = 0.0;
        std::vector<std::size_t> kept;  // live KeepAll entries of this pair
    };

    struct Kept {
        std::size_t slot;
        Timestamp t;
        bool alive;
    };

    Coalesce coalesce_;
    Directionality dir_;
    std::vector<PairState> pairs_;
    std::unordered_map<PairKey, std::size_t> slot_of_;
    std::vector<Kept> kept_;
};

}  // namespace

std::vector<Snapshot> make_snapshots(const TemporalGraph& g, const SnapshotSpec& spec) {
    check_spec(spec);
    if (g.empty()) return {};

    Partition p = partition(g, spec.mode);
    const auto events = g.events();
    const std::size_t count = p.shells.size();

    bool lifecycle = false;
    for (const Event& e : events)
        lifecycle |= e.kind == EventKind::NodeAdd || e.kind == EventKind::NodeDelete;

    std::vector<Snapshot> out = std::move(p.shells);
    std::vector<std::uint8_t> active(lifecycle ? g.num_nodes() : 0, 1);
    std::size_t cursor = 0;
    EdgeAccumulator cumulative(spec.coalesce, spec.directionality);

    for (std::size_t w = 0; w < count; ++w) {
        EdgeAccumulator interval(spec.coalesce, spec.directionality);
        while (cursor < events.size() && p.window_of[cursor] == w) {
            const Event& e = events[cursor++];
            if (spec.accumulation == Accumulation::Interval)
                interval.apply(e);
            else
                cumulative.apply(e);
            if (e.kind == EventKind::NodeAdd) active[e.src] = 1;
            if (e.kind == EventKind::NodeDelete) active[e.src] = 0;
        }
        Snapshot& s = out[w];
        s.node_count = g.num_nodes();
        s.edges = spec.accumulation == Accumulation::Interval ? interval.edges() : cumulative.edges();
        s.active = active;
    }
    return out;
}

Snapshot to_static(const TemporalGraph& g, Coalesce coalesce, Directionality dir) {
    if (g.empty()) {
        Snapshot s;
        s.node_count = g.num_nodes();
        return s;
    }
    SnapshotSpec spec;
    spec.mode = FixedCount{1};
    spec.coalesce = coalesce;
    spec.accumulation = Accumulation::Cumulative;
    spec.directionality = dir;
    return std::move(make_snapshots(g, spec).front());
}

TemporalGraph snapshots_to_events(const std::vector<Snapshot>& snapshots) {
    const std::size_t n = snapshots.empty() ? 0 : snapshots.front().node_count;
    std::vector<Event> events;
    for (std::size_t i = 0; i < snapshots.size(); ++i) {
        const Snapshot& s = snapshots[i];
        if (s.node_count != n) throw ArgumentError("snapshots disagree on node count");
        for (const SnapshotEdge& e : s.edges) {
            for (std::uint32_t c = 0; c < e.multiplicity; ++c) {
                Event ev;
                ev.kind = EventKind::EdgeAdd;
                ev.src = e.src;
                ev.dst = e.dst;
                ev.t = static_cast<Timestamp>(i);
                events.push_back(ev);
            }
        }
    }
    return make_graph(n, std::move(events));
}

}  // namespace tg
