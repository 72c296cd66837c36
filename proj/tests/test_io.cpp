#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "test_util.hpp"
#include "tg/errors.hpp"
#include "tg/io.hpp"

using namespace tg;

namespace {

const char* kD0Csv =
    "src,dst,t\n"
    "0,1,1.0\n"
    "0,2,2.0\n"
    "1,2,3.0\n"
    "0,1,4.0\n"
    "2,3,5.0\n";

Dataset parse(const std::string& text) {
    std::istringstream in(text);
    return parse_events_csv(in);
}

std::multiset<std::tuple<std::string, std::string, double, int>> event_multiset(const Dataset& d) {
    std::multiset<std::tuple<std::string, std::string, double, int>> out;
    const auto& vocab = d.graph.vocabulary();
    for (const Event& e : d.graph.events())
        out.insert({vocab.to_raw(e.src), e.dst ? vocab.to_raw(*e.dst) : "", e.t, static_cast<int>(e.kind)});
    return out;
}

}  // namespace

TEST(EventsCsv, ParsesD0) {
    const Dataset d = parse(kD0Csv);
    EXPECT_EQ(d.graph.num_events(), 5u);
    EXPECT_EQ(d.graph.num_nodes(), 4u);
    EXPECT_EQ(d.graph.t_min(), 1.0);
    EXPECT_EQ(d.graph.t_max(), 5.0);
    EXPECT_DOUBLE_EQ(edge_recurrence_ratio(d.graph), 0.2);
}

TEST(EventsCsv, KindsLabelsAndFeatures) {
    const Dataset d = parse(
        "src,dst,t,kind,label,f0,f1\n"
        "a,b,2,add,1,0.5,1.5\n"
        "a,,1,node_add,,0,0\n"
        "a,b,3,delete,0,2,3\n");
    ASSERT_EQ(d.graph.num_events(), 3u);
    EXPECT_EQ(d.graph.event(0).kind, EventKind::NodeAdd);
    EXPECT_FALSE(d.graph.event(0).dst.has_value());
    EXPECT_EQ(d.graph.event(1).label, 1);
    EXPECT_EQ(d.graph.event(2).kind, EventKind::EdgeDelete);
    ASSERT_EQ(d.features.edges.columns.size(), 2u);
    EXPECT_EQ(d.features.edges.columns[1].values[0], 1.5);
    EXPECT_EQ(*d.graph.event(1).feature_ref, 0u);
}

TEST(EventsCsv, Errors) {
    try {
        parse("src,dst,t,weight\n0,1,1,2\n");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 1u);
    }
    try {
        parse("src,dst,t\n0,1,1\n0,1,abc\n");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
    }
    EXPECT_THROW(parse("src,dst,t,kind\n0,1,1,merge\n"), ParseError);
    EXPECT_THROW(parse("src,dst,t\n0,1\n"), ParseError);
    EXPECT_THROW(parse("src,dst,t\n0,,1\n"), IngestError);
    EXPECT_THROW(parse("src,dst,t\n0,1,nan\n"), IngestError);
    EXPECT_THROW(parse(""), ParseError);
}

TEST(EventsCsv, RoundTripKeepsMultiset) {
    std::mt19937_64 gen(1);
    std::uniform_int_distribution<int> node(0, 9);
    std::uniform_int_distribution<int> time(0, 30);
    for (int round = 0; round < 20; ++round) {
        std::string text = "src,dst,t,kind\n";
        for (int i = 0; i < 40; ++i)
            text += "n" + std::to_string(node(gen)) + ",n" + std::to_string(node(gen)) + "," +
                    std::to_string(time(gen)) + "." + std::to_string(node(gen)) + "," +
                    (i % 7 == 0 ? "delete" : "add") + "\n";
        const Dataset d = parse(text);
        std::ostringstream out;
        write_events_csv(out, d);
        const Dataset again = parse(out.str());
        ASSERT_EQ(event_multiset(again), event_multiset(d));
        for (std::size_t i = 1; i < again.graph.num_events(); ++i)
            ASSERT_LE(again.graph.event(i - 1).t, again.graph.event(i).t);
    }
}

TEST(Cache, RoundTripAndDeterminism) {
    const Dataset d = parse(
        "src,dst,t,kind,label,f0\n"
        "x,y,2.5,add,3,0.25\n"
        "y,z,1.0,add,,1\n"
        "x,,3,node_delete,,0\n");
    const auto bytes = encode_cache(d);
    EXPECT_EQ(decode_cache(bytes), d);
    EXPECT_EQ(encode_cache(decode_cache(bytes)), bytes);

    tgtest::TempDir dir("cache");
    write_cache(dir / "a.tgev", d);
    write_cache(dir / "b.tgev", d);
    EXPECT_EQ(read_text_file(dir / "a.tgev"), read_text_file(dir / "b.tgev"));
    EXPECT_EQ(read_cache(dir / "a.tgev"), d);
    EXPECT_EQ(load_dataset(dir / "a.tgev"), d);
}

TEST(Cache, Layout) {
    const Dataset d = parse(kD0Csv);
    const auto bytes = encode_cache(d);
    ASSERT_GE(bytes.size(), 22u);
    EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 4), "TGEV");
    EXPECT_EQ(bytes[4], 1);
    EXPECT_EQ(bytes[5], 0);
    EXPECT_EQ(bytes[6], 4);   // nodes, little-endian
    EXPECT_EQ(bytes[14], 5);  // events
}

TEST(Cache, RejectsCorruptInput) {
    auto bytes = encode_cache(parse(kD0Csv));
    auto bad_magic = bytes;
    bad_magic[0] = 'X';
    EXPECT_THROW(decode_cache(bad_magic), CacheError);
    auto bad_version = bytes;
    bad_version[4] = 9;
    EXPECT_THROW(decode_cache(bad_version), CacheError);
    bytes.resize(bytes.size() - 3);
    EXPECT_THROW(decode_cache(bytes), CacheError);
}

TEST(Files, MissingFileIsIoError) {
    EXPECT_THROW(read_events_csv("/nonexistent/dir/events.csv"), IoError);
    EXPECT_THROW(read_text_file("/nonexistent/file"), IoError);
}

TEST(NodeFeatures, StaticAndDynamicWithSchema) {
    tgtest::TempDir dir("features");
    const Dataset d = parse(kD0Csv);
    write_text_file(dir / "schema.csv", "age,numeric\ncolor,categorical\n");
    write_text_file(dir / "static.csv", "node,age,color\n2,30,red\n0,,blue\n");
    FeatureTable table;
    read_node_features(dir / "static.csv", dir / "schema.csv", d.graph, table);
    ASSERT_EQ(table.nodes.num_rows(), 4u);
    EXPECT_EQ(table.nodes.columns[0].values[2], 30.0);
    EXPECT_TRUE(std::isnan(table.nodes.columns[0].values[0]));
    EXPECT_EQ(table.nodes.columns[1].categories[0], "blue");
    EXPECT_EQ(table.nodes.row_times[3], 5.0);

    write_text_file(dir / "dynamic.csv", "node,t,age,color\n1,2.5,31,green\n1,4,32,green\n");
    read_node_features(dir / "dynamic.csv", dir / "schema.csv", d.graph, table);
    EXPECT_EQ(table.dynamic_node_ids, (std::vector<NodeId>{1, 1}));
    EXPECT_EQ(table.dynamic_nodes.row_times, (std::vector<double>{2.5, 4}));

    write_text_file(dir / "text_schema.csv", "bio,text\n");
    EXPECT_THROW(read_node_features(dir / "static.csv", dir / "text_schema.csv", d.graph, table), SchemaError);
    write_text_file(dir / "unknown.csv", "node,age,color\n9,1,red\n");
    EXPECT_THROW(read_node_features(dir / "unknown.csv", dir / "schema.csv", d.graph, table), ParseError);
}

TEST(Stats, D0Bundle) {
    SnapshotSpec spec;
    spec.mode = FixedWidth{2.0};
    const StatsBundle s = compute_stats(parse(kD0Csv).graph, spec);
    EXPECT_EQ(s.num_nodes, 4u);
    EXPECT_EQ(s.num_edge_adds, 5u);
    EXPECT_EQ(s.time_span, 4.0);
    EXPECT_DOUBLE_EQ(s.recurrence_ratio, 0.2);
    ASSERT_EQ(s.snapshots.size(), 3u);
    EXPECT_EQ(s.snapshots[0].active_nodes, 3u);
    EXPECT_EQ(s.snapshots[2].edge_events, 1u);

    tgtest::TempDir dir("stats");
    const auto files = write_stats(s, dir.path(), "d0");
    ASSERT_EQ(files.size(), 3u);
    for (const auto& f : files) EXPECT_TRUE(std::filesystem::exists(f));
    EXPECT_EQ(files[0].filename(), "d0.snapshots.csv");
}
