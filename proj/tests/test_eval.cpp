#include <gtest/gtest.h>

#include <random>

#include "test_util.hpp"
#include "tg/errors.hpp"
#include "tg/eval.hpp"

using namespace tg;

namespace {

// Checks on every call that nothing at or after the query time is visible.
class LeakSpy : public LinkScorer {
public:
    void advance(const HistoryView& history) override {
        EXPECT_GE(history.horizon(), last_horizon);
        last_horizon = history.horizon();
    }
    double score(const HistoryView& history, NodeId u, NodeId v, Timestamp t) override {
        ++calls;
        EXPECT_LE(history.horizon(), t);
        for (const Event& e : history.events()) EXPECT_LT(e.t, t);
        for (NodeId x : {u, v})
            for (const AdjEntry& a : history.neighbors(x)) EXPECT_LT(a.t, t);
        return static_cast<double>(history.neighbors(u).size());
    }
    Timestamp last_horizon = -1e300;
    std::size_t calls = 0;
};

TemporalGraph repeat_stream(std::size_t pairs, std::size_t nodes) {
    // training: each pair (i, i+1) once; test: the same pairs again
    std::vector<Event> events;
    double t = 0;
    for (int pass = 0; pass < 4; ++pass)
        for (std::size_t i = 0; i < pairs; ++i)
            events.push_back(tgtest::edge(static_cast<NodeId>(i), static_cast<NodeId>(i + 1), t++));
    return make_graph(nodes, events);
}

}  // namespace

TEST(Split, D0Quantiles) {
    const TemporalGraph g = tgtest::d0();
    const SplitResult s = chronological_split(g, {0.6, 0.2, 0.2});
    EXPECT_EQ(s.t_train_end, 4.0);
    EXPECT_EQ(s.t_val_end, 5.0);
    EXPECT_EQ(s.tags, (std::vector<SplitTag>{SplitTag::Train, SplitTag::Train, SplitTag::Train, SplitTag::Val,
                                             SplitTag::Test}));
    EXPECT_EQ(s.test_positions, (std::vector<std::size_t>{4}));
    EXPECT_EQ(s.test_unseen, (std::vector<std::uint8_t>{1}));
}

TEST(Split, ExactThirds) {
    const TemporalGraph g = make_graph(3, {tgtest::edge(0, 1, 1.0), tgtest::edge(1, 2, 2.0), tgtest::edge(0, 2, 3.0)});
    const SplitResult s = chronological_split(g, {1.0 / 3, 1.0 / 3, 1.0 / 3});
    EXPECT_EQ(s.tags, (std::vector<SplitTag>{SplitTag::Train, SplitTag::Val, SplitTag::Test}));
    EXPECT_EQ(s.test_unseen, (std::vector<std::uint8_t>{0}));
}

TEST(Split, Errors) {
    const TemporalGraph two = make_graph(3, {tgtest::edge(0, 1, 1.0), tgtest::edge(1, 2, 2.0)});
    EXPECT_THROW(chronological_split(two, {}), SplitError);
    const TemporalGraph flat = make_graph(3, {tgtest::edge(0, 1, 1.0), tgtest::edge(1, 2, 1.0), tgtest::edge(0, 2, 1.0)});
    EXPECT_THROW(chronological_split(flat, {}), SplitError);
    EXPECT_THROW(chronological_split(tgtest::d0(), {0.5, 0.2, 0.2}), ArgumentError);
    EXPECT_THROW(chronological_split(tgtest::d0(), {1.2, -0.1, -0.1}), ArgumentError);
}

TEST(SplitProperty, TagsFollowBoundaries) {
    std::mt19937_64 gen(8);
    for (int round = 0; round < 30; ++round) {
        tgtest::RandomGraphOptions o;
        o.nodes = 30;
        o.events = 50 + 10 * round;
        o.t_max = 40;
        const TemporalGraph g = tgtest::random_graph(gen, o);
        const SplitResult s = chronological_split(g, {});
        ASSERT_LT(s.t_train_end, s.t_val_end + 1e-300);
        for (std::size_t i = 0; i < g.num_events(); ++i) {
            const double t = g.event(i).t;
            const SplitTag want = t < s.t_train_end ? SplitTag::Train : t < s.t_val_end ? SplitTag::Val : SplitTag::Test;
            ASSERT_EQ(s.tags[i], want);
        }
    }
}

TEST(LinkEval, ScorersNeverSeeTheFuture) {
    std::mt19937_64 gen(2);
    tgtest::RandomGraphOptions o;
    o.nodes = 30;
    o.events = 1000;
    o.t_max = 300;
    const TemporalGraph g = tgtest::random_graph(gen, o);
    const SplitResult split = chronological_split(g, {});
    for (auto strategy : {NegativeStrategy::Random, NegativeStrategy::Historical}) {
        LeakSpy spy;
        NegativeSpec spec;
        spec.strategy = strategy;
        spec.seed = 5;
        const MetricsReport r = evaluate_link_prediction(g, split, spy, spec, {37});
        EXPECT_EQ(r.positives, split.test_positions.size());
        EXPECT_EQ(spy.calls, r.positives + r.negatives_random + r.negatives_historical);
        EXPECT_TRUE(r.auc.has_value());
    }
}

TEST(LinkEval, ForcedEdgeBankResults) {
    const TemporalGraph g = repeat_stream(50, 200);
    const SplitResult split = chronological_split(g, {0.5, 0.25, 0.25});
    NegativeSpec spec;
    spec.seed = 1;
    EdgeBankScorer random_scorer{EdgeBank()};
    const MetricsReport r = evaluate_link_prediction(g, split, random_scorer, spec, {10});
    EXPECT_EQ(*r.auc, 1.0);
    EXPECT_EQ(*r.average_precision, 1.0);
    EXPECT_EQ(*r.mrr, 1.0);

    spec.strategy = NegativeStrategy::Historical;
    EdgeBankScorer hist_scorer{EdgeBank()};
    const MetricsReport h = evaluate_link_prediction(g, split, hist_scorer, spec, {10});
    EXPECT_EQ(h.topped_up, 0u);
    EXPECT_EQ(*h.auc, 0.5);
    EXPECT_EQ(h.negatives_historical, h.positives);
}

TEST(LinkEval, StagedScorerComposes) {
    const TemporalGraph g = repeat_stream(20, 40);
    const SplitResult split = chronological_split(g, {});
    StagedLinkScorer staged(
        [](const HistoryView& h, NodeId u, Timestamp) {
            return std::vector<double>{static_cast<double>(h.neighbors(u).size())};
        },
        [](const HistoryView&, NodeId u, Timestamp) { return std::vector<double>{static_cast<double>(u)}; },
        [](std::span<const double> tu, std::span<const double>, std::span<const double> tv,
           std::span<const double>) { return tu[0] + tv[0]; });
    const MetricsReport r = evaluate_link_prediction(g, split, staged, NegativeSpec{}, {});
    ASSERT_TRUE(r.auc.has_value());
    EXPECT_GE(*r.auc, 0.0);
    EXPECT_LE(*r.auc, 1.0);
}

TEST(Report, KeyValueAndCsv) {
    MetricsReport r;
    r.task = "node";
    r.accuracy = 0.5;
    r.evaluated = 4;
    const std::string kv = r.to_key_value();
    EXPECT_NE(kv.find("task=node\n"), std::string::npos);
    EXPECT_NE(kv.find("accuracy=0.5\n"), std::string::npos);
    EXPECT_NE(kv.find("macro_f1=nan\n"), std::string::npos);
    const std::string header = r.csv_header();
    const std::string row = r.csv_row();
    EXPECT_EQ(std::count(header.begin(), header.end(), ','), std::count(row.begin(), row.end(), ','));
    EXPECT_EQ(header.substr(0, 5), "task,");
}

TEST(NodeLabels, PersistenceExamples) {
    const std::vector<NodeLabel> same = {{0, 1.0, 7}, {0, 3.0, 7}};
    EXPECT_EQ(LabelHistory(same, 5.0, 9).last_label(0), 7);
    EXPECT_FALSE(LabelHistory(same, 5.0, 9).last_label(1).has_value());
    EXPECT_FALSE(LabelHistory(same, 1.0, 9).last_label(0).has_value());
    const std::vector<NodeLabel> alternating = {{0, 1.0, 1}, {0, 2.0, 2}};
    EXPECT_EQ(LabelHistory(alternating, 2.5, 9).last_label(0), 2);
    EXPECT_EQ(LabelHistory(alternating, 2.0, 9).last_label(0), 1);

    PersistenceClassifier c;
    const TemporalGraph g = tgtest::d0();
    const TemporalAdjacency idx = build_index(g);
    const HistoryView view(g, idx, 2.5);
    EXPECT_EQ(c.predict(view, LabelHistory(alternating, 2.5, 9), 0, 2.5), 2);
    EXPECT_EQ(c.predict(view, LabelHistory(alternating, 2.5, 9), 3, 2.5), 9);
}

TEST(NodeEval, DynamicPersistence) {
    // node 0 keeps label 1, node 1 flips from 2 to 3 during test
    std::vector<Event> events;
    for (int i = 0; i < 20; ++i) {
        Event e = tgtest::edge(i % 2, 2, static_cast<double>(i));
        e.label = i % 2 == 0 ? 1 : (i < 17 ? 2 : 3);
        events.push_back(e);
    }
    const TemporalGraph g = make_graph(3, events);
    const SplitResult split = chronological_split(g, {0.7, 0.15, 0.15});
    PersistenceClassifier c;
    const auto labels = labels_from_events(g, true);
    const MetricsReport r = evaluate_node_classification(g, labels, split, c, true);
    EXPECT_EQ(r.task, "node");
    // evaluated events t=17,18,19: 17 mispredicted (2 vs 3), others right
    EXPECT_EQ(r.evaluated, 3u);
    EXPECT_DOUBLE_EQ(*r.accuracy, 2.0 / 3.0);
}

TEST(NodeEval, StaticUsesMajorityForNewNodes) {
    std::vector<Event> events;
    for (int i = 0; i < 10; ++i) {
        Event e = tgtest::edge(static_cast<NodeId>(i), static_cast<NodeId>(i + 1), static_cast<double>(i));
        e.label = i < 7 ? 4 : 5;
        events.push_back(e);
    }
    const TemporalGraph g = make_graph(11, events);
    const SplitResult split = chronological_split(g, {0.6, 0.2, 0.2});
    PersistenceClassifier c;
    const auto labels = labels_from_events(g, false);
    const MetricsReport r = evaluate_node_classification(g, labels, split, c, false);
    EXPECT_GT(r.evaluated, 0u);
    EXPECT_EQ(*r.accuracy, 0.0);  // all new nodes carry 5, majority is 4
}

TEST(NodeEval, EmptyEvaluationIsAnError) {
    const TemporalGraph g = tgtest::d0();
    const SplitResult split = chronological_split(g, {0.6, 0.2, 0.2});
    PersistenceClassifier c;
    EXPECT_THROW(evaluate_node_classification(g, {}, split, c, true), MetricError);
}
