#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "tg/features.hpp"
#include "tg/graph.hpp"
#include "tg/snapshot.hpp"

namespace tg {

// A graph plus its features. Edge feature row i belongs to the event with feature_ref i.
struct Dataset {
    TemporalGraph graph;
    FeatureTable features;

    friend bool operator==(const Dataset&, const Dataset&) = default;
};

// Event CSV: header "src,dst,t[,kind][,label][,f0,...,f{k-1}]" in that order; unknown
// columns are rejected. kind is one of add, delete, node_add, node_delete, node_update
// (default add). Node events leave dst empty. Edge features are stored as f32.
// Throws ParseError (with line number) on malformed input, IngestError on rejected records.
Dataset parse_events_csv(std::istream& in);
Dataset read_events_csv(const std::filesystem::path& path);

// Writes the stream in (t, id) order with raw ids; kind always, label/features when present.
void write_events_csv(std::ostream& out, const Dataset& data);

// Binary cache, all little-endian, no padding:
//   "TGEV" | u16 version | u64 nodes | u64 events
//   | u8 kind[E] | u64 src[E] | u64 dst[E] (all ones when absent) | f64 t[E]
//   | label bitmap (ceil(E/8) bytes, LSB first) | i32 label[E] (0 when absent)
//   | u64 feature_dim | f32 features[E * feature_dim] (row-major)
//   | per node: u32 byte length + raw id bytes
// Event arrays are in ingestion (id) order.
inline constexpr std::uint16_t kCacheVersion = 1;

std::vector<std::uint8_t> encode_cache(const Dataset& data);
// Throws CacheError on bad magic, version or truncation.
Dataset decode_cache(std::span<const std::uint8_t> bytes);
void write_cache(const std::filesystem::path& path, const Dataset& data);
Dataset read_cache(const std::filesystem::path& path);

// Reads a cache if the file starts with the cache magic, otherwise an event CSV.
Dataset load_dataset(const std::filesystem::path& path);

// Node feature CSV: header "node,<columns...>" (static) or "node,t,<columns...>"
// (dynamic). The schema sidecar has one "column,kind" line per feature column with kind
// numeric or categorical; textual columns are rejected with SchemaError. Static rows are
// aligned to dense node ids; a node's row time is its first event time.
void read_node_features(const std::filesystem::path& csv_path, const std::filesystem::path& schema_path,
                        const TemporalGraph& g, FeatureTable& table);

struct SnapshotStats {
    std::size_t index;
    Timestamp start;
    Timestamp end;
    std::size_t active_nodes;  // nodes with at least one edge in the snapshot
    std::size_t edges;
    std::size_t edge_events;   // sum of edge multiplicities
};

struct StatsBundle {
    std::size_t num_nodes = 0;
    std::size_t num_events = 0;
    std::size_t num_edge_adds = 0;
    Timestamp time_span = 0.0;
    double recurrence_ratio = 0.0;
    std::vector<SnapshotStats> snapshots;
    std::vector<std::pair<std::size_t, std::size_t>> degree_histogram;  // (degree, node count)
};

// Fraction of EdgeAdds whose pair already had an EdgeAdd earlier in the stream.
double edge_recurrence_ratio(const TemporalGraph& g, Directionality dir = Directionality::Symmetrized);

StatsBundle compute_stats(const TemporalGraph& g, const SnapshotSpec& spec);

// Writes <name>.snapshots.csv, <name>.degrees.csv and <name>.summary.csv into dir and
// returns the written paths.
std::vector<std::filesystem::path> write_stats(const StatsBundle& stats, const std::filesystem::path& dir,
                                               const std::string& name);

// Whole-file helpers; throw IoError.
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace tg
