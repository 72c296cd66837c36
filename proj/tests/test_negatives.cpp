#include <gtest/gtest.h>

#include <random>
#include <set>

#include "test_util.hpp"
#include "tg/errors.hpp"
#include "tg/negatives.hpp"
#include "tg/sampling.hpp"

using namespace tg;

namespace {

using PairSet = std::set<NodePair>;

PairSet as_set(const SeenSet& s) {
    const auto v = s.sorted_pairs();
    return {v.begin(), v.end()};
}

// Brute-force: canonical pairs with an EdgeAdd in [lo, hi).
PairSet seen_oracle(const TemporalGraph& g, double lo, double hi) {
    PairSet out;
    for (const Event& e : g.events())
        if (e.kind == EventKind::EdgeAdd && e.t >= lo && e.t < hi)
            out.insert({std::min(e.src, *e.dst), std::max(e.src, *e.dst)});
    return out;
}

NodePair canon(NodePair p) { return {std::min(p.first, p.second), std::max(p.first, p.second)}; }

}  // namespace

TEST(SeenSet, D0Ranges) {
    const TemporalGraph g = tgtest::d0();
    EXPECT_EQ(as_set(build_seen_set(g, {1.0, 4.0})), (PairSet{{0, 1}, {0, 2}, {1, 2}}));
    EXPECT_TRUE(build_seen_set(g, {6.0, 9.0}).empty());
    EXPECT_EQ(build_seen_set(g, {1.0, 6.0}).size(), 4u);
    EXPECT_THROW(build_seen_set(g, {3.0, 2.0}), ArgumentError);
}

TEST(RandomNegatives, OnlyAdmissibleCorruption) {
    const TemporalGraph g = tgtest::d0();
    const std::vector<NodePair> positives = {{0, 1}};
    for (std::uint64_t s = 0; s < 20; ++s) {
        CounterRng rng(s);
        const NegativeSample n = random_negatives(g, {4.0, 6.0}, positives, 1, rng);
        ASSERT_EQ(n.pairs, (std::vector<NodePair>{{0, 3}}));
        EXPECT_EQ(n.owner, (std::vector<std::size_t>{0}));
        EXPECT_FALSE(n.saturated);
    }
}

TEST(RandomNegatives, SaturatesOnFullySeenGraph) {
    const TemporalGraph g = make_graph(2, {tgtest::edge(0, 1, 1.0), tgtest::edge(0, 1, 2.0)});
    const std::vector<NodePair> positives = {{0, 1}};
    CounterRng rng(1);
    const NegativeSample n = random_negatives(g, {2.0, 3.0}, positives, 1, rng);
    EXPECT_TRUE(n.saturated);
    EXPECT_TRUE(n.pairs.empty());
}

TEST(RandomNegatives, StarDistinctLeaves) {
    // center 0, positive partner 1, 50 never-seen leaves 2..51
    const TemporalGraph g = make_graph(52, {tgtest::edge(0, 1, 1.0)});
    const std::vector<NodePair> positives = {{0, 1}};
    CounterRng rng(4);
    const NegativeSample n = random_negatives(g, {1.0, 2.0}, positives, 3, rng);
    ASSERT_EQ(n.pairs.size(), 3u);
    std::set<NodeId> leaves;
    for (const auto& [u, v] : n.pairs) {
        EXPECT_EQ(u, 0u);
        EXPECT_GE(v, 2u);
        leaves.insert(v);
    }
    EXPECT_EQ(leaves.size(), 3u);
}

TEST(HistoricalNegatives, D0Pool) {
    const TemporalGraph g = tgtest::d0();
    CounterRng rng(2);
    const NegativeSample n = historical_negatives(g, {4.0, 6.0}, 2, rng, NegativeFallback::Strict);
    EXPECT_EQ(PairSet(n.pairs.begin(), n.pairs.end()), (PairSet{{0, 2}, {1, 2}}));
    EXPECT_FALSE(n.shortfall);
}

TEST(HistoricalNegatives, EmptyPool) {
    const TemporalGraph g = tgtest::d0();
    CounterRng rng(2);
    NegativeSample n = historical_negatives(g, {1.0, 2.0}, 3, rng, NegativeFallback::Strict);
    EXPECT_TRUE(n.pairs.empty());
    EXPECT_TRUE(n.shortfall);
    n = historical_negatives(g, {1.0, 6.0}, 3, rng, NegativeFallback::Strict);
    EXPECT_TRUE(n.pairs.empty());
    EXPECT_THROW(historical_negatives(g, {0.5, 6.0}, 1, rng, NegativeFallback::Strict), ArgumentError);
}

TEST(HistoricalNegatives, TopUpWithUnseenPairs) {
    const TemporalGraph g = tgtest::d0();
    CounterRng rng(9);
    const NegativeSample n = historical_negatives(g, {4.0, 6.0}, 3, rng, NegativeFallback::ToRandom);
    ASSERT_EQ(n.pairs.size(), 3u);
    EXPECT_TRUE(n.shortfall);
    EXPECT_EQ(n.topped_up, 1u);
    // the only never-seen pairs in D0 by t=6 are (0,3) and (1,3)
    const NodePair extra = canon(n.pairs[2]);
    EXPECT_TRUE(extra == NodePair(0, 3) || extra == NodePair(1, 3));
}

TEST(NegativesProperty, BruteForceInvariants) {
    std::mt19937_64 gen(23);
    for (int round = 0; round < 25; ++round) {
        tgtest::RandomGraphOptions o;
        o.nodes = 30;
        o.events = 300;
        o.t_max = 100;
        const TemporalGraph g = tgtest::random_graph(gen, o);
        const auto windows = iterate_link_batches(g, 25);
        for (std::size_t b = 1; b < windows.size(); ++b) {
            const LinkWindow& w = windows[b];
            std::vector<NodePair> positives;
            for (auto pos : w.positions) positives.emplace_back(g.event(pos).src, *g.event(pos).dst);
            PairSet window_pos;
            for (auto p : positives) window_pos.insert(canon(p));
            const PairSet before_end = seen_oracle(g, -1e300, w.t_end);
            const PairSet before_start = seen_oracle(g, -1e300, w.t_start);
            const PairSet inside = seen_oracle(g, w.t_start, w.t_end);

            CounterRng rng(round * 100 + b);
            const NegativeSample r = random_negatives(g, {w.t_start, w.t_end}, positives, 2, rng);
            PairSet distinct_per_owner;
            for (std::size_t i = 0; i < r.pairs.size(); ++i) {
                const NodePair p = r.pairs[i];
                ASSERT_NE(p.first, p.second);
                ASSERT_EQ(p.first, positives[r.owner[i]].first);
                ASSERT_FALSE(before_end.count(canon(p)));
                ASSERT_FALSE(window_pos.count(canon(p)));
            }

            const NegativeSample h = historical_negatives(g, {w.t_start, w.t_end}, 10, rng, NegativeFallback::Strict);
            PairSet drawn;
            for (const NodePair& p : h.pairs) {
                ASSERT_TRUE(before_start.count(canon(p)));
                ASSERT_FALSE(inside.count(canon(p)));
                ASSERT_TRUE(drawn.insert(canon(p)).second);
            }
            std::size_t pool = 0;
            for (const auto& p : before_start) pool += !inside.count(p);
            ASSERT_EQ(h.pairs.size(), std::min<std::size_t>(10, pool));
            ASSERT_EQ(h.shortfall, pool < 10);
        }
    }
}

TEST(StreamingSampler, MatchesStandaloneDraws) {
    std::mt19937_64 gen(31);
    tgtest::RandomGraphOptions o;
    o.nodes = 40;
    o.events = 500;
    o.t_max = 100;
    const TemporalGraph g = tgtest::random_graph(gen, o);
    for (auto strategy : {NegativeStrategy::Random, NegativeStrategy::Historical}) {
        NegativeSpec spec;
        spec.strategy = strategy;
        spec.per_positive = 2;
        spec.seed = 77;
        StreamingNegativeSampler sampler(g, spec);
        const auto windows = iterate_link_batches(g, 50);
        for (std::size_t b = 1; b < windows.size(); ++b) {
            const LinkWindow& w = windows[b];
            std::vector<NodePair> positives;
            for (auto pos : w.positions) positives.emplace_back(g.event(pos).src, *g.event(pos).dst);
            const NegativeSample streamed = sampler.draw({w.t_start, w.t_end}, positives, b);
            CounterRng rng(spec.seed, static_cast<std::uint32_t>(b), 0);
            const NegativeSample direct =
                strategy == NegativeStrategy::Random
                    ? random_negatives(g, {w.t_start, w.t_end}, positives, 2, rng)
                    : historical_negatives(g, {w.t_start, w.t_end}, 2 * positives.size(), rng,
                                           NegativeFallback::ToRandom);
            ASSERT_EQ(streamed.pairs, direct.pairs);
            // determinism across fresh samplers
            StreamingNegativeSampler again(g, spec);
            for (std::size_t k = 1; k < b; ++k) {
                std::vector<NodePair> pk;
                for (auto pos : windows[k].positions) pk.emplace_back(g.event(pos).src, *g.event(pos).dst);
                again.draw({windows[k].t_start, windows[k].t_end}, pk, k);
            }
            ASSERT_EQ(again.draw({w.t_start, w.t_end}, positives, b).pairs, streamed.pairs);
        }
    }
}
