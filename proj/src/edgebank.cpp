#include "tg/edgebank.hpp"

#include <algorithm>

#include "tg/errors.hpp"

namespace tg {

EdgeBank::EdgeBank(EdgeBankVariant variant, Directionality dir) : variant_(variant), dir_(dir) {
    if (const auto* tw = std::get_if<EdgeBankTimeWindow>(&variant_); tw && !(tw->window > 0))
        throw ArgumentError("EdgeBank window must be positive");
}

void EdgeBank::advance(std::span<const Event> sorted_events, Timestamp new_clock) {
    if (new_clock < clock_) throw ArgumentError("EdgeBank clock cannot move backwards");

    auto by_time = [](const Event& e, Timestamp t) { return e.t < t; };
    auto first = std::lower_bound(sorted_events.begin(), sorted_events.end(), clock_, by_time);
    auto last = std::lower_bound(first, sorted_events.end(), new_clock, by_time);

    const auto* tw = std::get_if<EdgeBankTimeWindow>(&variant_);
    for (auto it = first; it != last; ++it) {
        if (it->kind != EventKind::EdgeAdd) continue;
        const PairKey key = make_pair_key(it->src, *it->dst, dir_);
        last_seen_[key] = it->t;
        if (tw) buffer_.push_back({key, it->t});
    }
    clock_ = new_clock;

    if (!tw) return;
    const Timestamp horizon = clock_ - tw->window;
    while (!buffer_.empty() && buffer_.front().t < horizon) {
        auto it = last_seen_.find(buffer_.front().key);
        if (it != last_seen_.end() && it->second == buffer_.front().t) last_seen_.erase(it);
        buffer_.pop_front();
    }
}

int EdgeBank::score(NodeId u, NodeId v) const {
    auto it = last_seen_.find(make_pair_key(u, v, dir_));
    if (it == last_seen_.end()) return 0;
    if (const auto* tw = std::get_if<EdgeBankTimeWindow>(&variant_)) return it->second >= clock_ - tw->window ? 1 : 0;
    return 1;
}

}  // namespace tg
