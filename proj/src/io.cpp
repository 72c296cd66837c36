#include "tg/io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <unordered_set>

#include "tg/errors.hpp"
#include "tg/text.hpp"

namespace tg {

namespace {

constexpr char kMagic[4] = {'T', 'G', 'E', 'V'};
constexpr std::uint64_t kNoDst = std::numeric_limits<std::uint64_t>::max();

double parse_real(std::string_view text, std::size_t line, const char* what) {
    text = trim(text);
    double value = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size())
        throw ParseError(line, std::string("cannot parse ") + what + " '" + std::string(text) + "'");
    return value;
}

std::int32_t parse_int32(std::string_view text, std::size_t line) {
    text = trim(text);
    std::int32_t value = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size())
        throw ParseError(line, "cannot parse label '" + std::string(text) + "'");
    return value;
}

bool next_line(std::istream& in, std::string& line) {
    if (!std::getline(in, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
}

}  // namespace

// ---------------------------------------------------------------------------
// Event CSV

Dataset parse_events_csv(std::istream& in) {
    std::string line;
    if (!next_line(in, line)) throw ParseError(1, "missing header row");
    const auto header = split(line, ',');

    // src,dst,t then optional kind, label, f0..f{k-1}, in that order
    const std::vector<std::string> required = {"src", "dst", "t"};
    if (header.size() < 3) throw ParseError(1, "header must start with src,dst,t");
    for (std::size_t i = 0; i < 3; ++i)
        if (trim(header[i]) != required[i]) throw ParseError(1, "header must start with src,dst,t");
    std::size_t col = 3;
    int kind_col = -1;
    int label_col = -1;
    if (col < header.size() && trim(header[col]) == "kind") kind_col = static_cast<int>(col++);
    if (col < header.size() && trim(header[col]) == "label") label_col = static_cast<int>(col++);
    const std::size_t feature_begin = col;
    for (std::size_t k = 0; col < header.size(); ++col, ++k) {
        if (trim(header[col]) != "f" + std::to_string(k))
            throw ParseError(1, "unexpected column '" + std::string(trim(header[col])) + "'");
    }
    const std::size_t dim = header.size() - feature_begin;

    std::vector<RawEventRecord> records;
    std::vector<std::vector<double>> features(dim);
    std::size_t line_no = 1;
    while (next_line(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto cells = split(line, ',');
        if (cells.size() != header.size())
            throw ParseError(line_no, "expected " + std::to_string(header.size()) + " fields, got " +
                                          std::to_string(cells.size()));
        RawEventRecord r;
        r.src = std::string(trim(cells[0]));
        if (r.src.empty()) throw ParseError(line_no, "empty src");
        const auto dst = trim(cells[1]);
        if (!dst.empty()) r.dst = std::string(dst);
        r.t = parse_real(cells[2], line_no, "timestamp");
        if (kind_col >= 0) {
            const auto text = trim(cells[static_cast<std::size_t>(kind_col)]);
            if (!text.empty()) {
                const auto kind = parse_event_kind(text);
                if (!kind) throw ParseError(line_no, "unknown kind '" + std::string(text) + "'");
                r.kind = *kind;
            }
        }
        if (label_col >= 0) {
            const auto text = trim(cells[static_cast<std::size_t>(label_col)]);
            if (!text.empty()) r.label = parse_int32(text, line_no);
        }
        if (dim > 0) r.feature_ref = records.size();
        for (std::size_t k = 0; k < dim; ++k) {
            const auto text = trim(cells[feature_begin + k]);
            const double x = text.empty() ? std::nan("") : parse_real(text, line_no, "feature");
            features[k].push_back(static_cast<double>(static_cast<float>(x)));
        }
        records.push_back(std::move(r));
    }

    Dataset data;
    data.graph = ingest_events(records);
    if (dim > 0) {
        FeatureBlock& edges = data.features.edges;
        edges.row_times.reserve(records.size());
        for (const auto& r : records) edges.row_times.push_back(r.t);
        for (std::size_t k = 0; k < dim; ++k)
            edges.columns.push_back({"f" + std::to_string(k), ColumnKind::Numeric, std::move(features[k]), {}});
    }
    return data;
}

Dataset read_events_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    return parse_events_csv(in);
}

void write_events_csv(std::ostream& out, const Dataset& data) {
    const TemporalGraph& g = data.graph;
    const auto& vocab = g.vocabulary();
    const bool labels = std::any_of(g.events().begin(), g.events().end(), [](const Event& e) { return e.label.has_value(); });
    const auto& fcols = data.features.edges.columns;

    out << "src,dst,t,kind";
    if (labels) out << ",label";
    for (std::size_t k = 0; k < fcols.size(); ++k) out << ",f" << k;
    out << '\n';
    for (const Event& e : g.events()) {
        out << vocab.to_raw(e.src) << ',' << (e.dst ? vocab.to_raw(*e.dst) : "") << ',' << format_real(e.t) << ','
            << to_string(e.kind);
        if (labels) out << ',' << (e.label ? std::to_string(*e.label) : "");
        for (const auto& c : fcols) {
            out << ',';
            if (e.feature_ref && !std::isnan(c.values.at(*e.feature_ref))) out << format_real(c.values[*e.feature_ref]);
        }
        out << '\n';
    }
}

// ---------------------------------------------------------------------------
// Binary cache

namespace {

class ByteWriter {
public:
    void raw(const void* p, std::size_t n) {
        const auto* b = static_cast<const std::uint8_t*>(p);
        bytes.insert(bytes.end(), b, b + n);
    }
    template <typename U>
    void uint(U value) {
        for (std::size_t i = 0; i < sizeof(U); ++i) bytes.push_back(static_cast<std::uint8_t>(value >> (8 * i)));
    }
    void f64(double x) { uint(std::bit_cast<std::uint64_t>(x)); }
    void f32(float x) { uint(std::bit_cast<std::uint32_t>(x)); }
    void i32(std::int32_t x) { uint(static_cast<std::uint32_t>(x)); }

    std::vector<std::uint8_t> bytes;
};

class ByteReader {
public:
    explicit ByteReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    template <typename U>
    U uint() {
        need(sizeof(U));
        U value = 0;
        for (std::size_t i = 0; i < sizeof(U); ++i) value |= static_cast<U>(static_cast<U>(bytes_[pos_ + i]) << (8 * i));
        pos_ += sizeof(U);
        return value;
    }
    double f64() { return std::bit_cast<double>(uint<std::uint64_t>()); }
    float f32() { return std::bit_cast<float>(uint<std::uint32_t>()); }
    std::int32_t i32() { return static_cast<std::int32_t>(uint<std::uint32_t>()); }
    std::span<const std::uint8_t> take(std::size_t n) {
        need(n);
        auto out = bytes_.subspan(pos_, n);
        pos_ += n;
        return out;
    }
    bool done() const noexcept { return pos_ == bytes_.size(); }

private:
    void need(std::size_t n) const {
        if (bytes_.size() - pos_ < n) throw CacheError("truncated cache");
    }

    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> encode_cache(const Dataset& data) {
    const TemporalGraph& g = data.graph;
    const std::size_t n_events = g.num_events();
    std::vector<const Event*> by_id(n_events, nullptr);
    for (const Event& e : g.events()) by_id.at(e.id) = &e;

    const auto& fcols = data.features.edges.columns;
    for (const auto& c : fcols)
        if (c.kind != ColumnKind::Numeric) throw CacheError("cache stores numeric edge features only");

    ByteWriter w;
    w.raw(kMagic, 4);
    w.uint<std::uint16_t>(kCacheVersion);
    w.uint<std::uint64_t>(g.num_nodes());
    w.uint<std::uint64_t>(n_events);
    for (const Event* e : by_id) w.uint<std::uint8_t>(static_cast<std::uint8_t>(e->kind));
    for (const Event* e : by_id) w.uint<std::uint64_t>(e->src);
    for (const Event* e : by_id) w.uint<std::uint64_t>(e->dst ? *e->dst : kNoDst);
    for (const Event* e : by_id) w.f64(e->t);
    std::vector<std::uint8_t> bitmap((n_events + 7) / 8, 0);
    for (std::size_t i = 0; i < n_events; ++i)
        if (by_id[i]->label) bitmap[i / 8] |= static_cast<std::uint8_t>(1u << (i % 8));
    w.raw(bitmap.data(), bitmap.size());
    for (const Event* e : by_id) w.i32(e->label.value_or(0));
    w.uint<std::uint64_t>(fcols.size());
    for (const Event* e : by_id) {
        for (const auto& c : fcols) {
            if (!e->feature_ref) throw CacheError("event without a feature row");
            w.f32(static_cast<float>(c.values.at(*e->feature_ref)));
        }
    }
    for (const auto& raw : g.vocabulary().raw_ids()) {
        w.uint<std::uint32_t>(static_cast<std::uint32_t>(raw.size()));
        w.raw(raw.data(), raw.size());
    }
    return std::move(w.bytes);
}

Dataset decode_cache(std::span<const std::uint8_t> bytes) {
    ByteReader r(bytes);
    const auto magic = r.take(4);
    if (!std::equal(magic.begin(), magic.end(), kMagic)) throw CacheError("bad cache magic");
    const auto version = r.uint<std::uint16_t>();
    if (version != kCacheVersion) throw CacheError("unsupported cache version " + std::to_string(version));
    const auto n_nodes = r.uint<std::uint64_t>();
    const auto n_events = r.uint<std::uint64_t>();
    if (n_events > bytes.size()) throw CacheError("truncated cache");

    std::vector<Event> events(n_events);
    for (auto& e : events) {
        const auto kind = r.uint<std::uint8_t>();
        if (kind > static_cast<std::uint8_t>(EventKind::NodeUpdate)) throw CacheError("bad event kind");
        e.kind = static_cast<EventKind>(kind);
    }
    for (auto& e : events) e.src = static_cast<NodeId>(r.uint<std::uint64_t>());
    for (auto& e : events) {
        const auto dst = r.uint<std::uint64_t>();
        if (dst != kNoDst) e.dst = static_cast<NodeId>(dst);
    }
    for (auto& e : events) e.t = r.f64();
    const auto bitmap = r.take((n_events + 7) / 8);
    for (std::size_t i = 0; i < n_events; ++i) {
        const std::int32_t label = r.i32();
        if (bitmap[i / 8] & (1u << (i % 8))) events[i].label = label;
    }
    const auto dim = r.uint<std::uint64_t>();
    Dataset data;
    FeatureBlock& edges = data.features.edges;
    if (dim > 0) {
        edges.columns.resize(dim);
        for (std::size_t k = 0; k < dim; ++k) edges.columns[k] = {"f" + std::to_string(k), ColumnKind::Numeric, {}, {}};
        for (std::size_t i = 0; i < n_events; ++i) {
            events[i].feature_ref = i;
            edges.row_times.push_back(events[i].t);
            for (std::size_t k = 0; k < dim; ++k) edges.columns[k].values.push_back(r.f32());
        }
    }
    IdVocabulary vocab;
    for (std::uint64_t u = 0; u < n_nodes; ++u) {
        const auto len = r.uint<std::uint32_t>();
        const auto raw = r.take(len);
        vocab.intern(std::string(raw.begin(), raw.end()));
    }
    if (!r.done()) throw CacheError("trailing bytes in cache");
    if (vocab.size() != n_nodes) throw CacheError("duplicate raw ids in cache vocabulary");
    try {
        data.graph = make_graph(n_nodes, std::move(events), std::move(vocab));
    } catch (const IngestError& e) {
        throw CacheError(std::string("invalid cached event: ") + e.what());
    }
    return data;
}

void write_cache(const std::filesystem::path& path, const Dataset& data) {
    const auto bytes = encode_cache(data);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("cannot write " + path.string());
}

Dataset read_cache(const std::filesystem::path& path) {
    const std::string content = read_text_file(path);
    return decode_cache({reinterpret_cast<const std::uint8_t*>(content.data()), content.size()});
}

Dataset load_dataset(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    char head[4] = {};
    in.read(head, 4);
    if (in.gcount() == 4 && std::equal(head, head + 4, kMagic)) return read_cache(path);
    return read_events_csv(path);
}

// ---------------------------------------------------------------------------
// Node features

void read_node_features(const std::filesystem::path& csv_path, const std::filesystem::path& schema_path,
                        const TemporalGraph& g, FeatureTable& table) {
    std::vector<std::pair<std::string, ColumnKind>> schema;
    {
        std::istringstream in(read_text_file(schema_path));
        std::string line;
        std::size_t line_no = 0;
        while (next_line(in, line)) {
            ++line_no;
            if (trim(line).empty()) continue;
            const auto parts = split(line, ',');
            if (parts.size() != 2) throw ParseError(line_no, "schema lines are 'column,kind'");
            const std::string name(trim(parts[0]));
            const auto kind = trim(parts[1]);
            if (kind == "numeric")
                schema.emplace_back(name, ColumnKind::Numeric);
            else if (kind == "categorical")
                schema.emplace_back(name, ColumnKind::Categorical);
            else if (kind == "text" || kind == "textual")
                throw SchemaError("column '" + name + "': textual attributes are not supported");
            else
                throw SchemaError("column '" + name + "': unknown kind '" + std::string(kind) + "'");
        }
    }

    std::ifstream in(csv_path);
    if (!in) throw IoError("cannot open " + csv_path.string());
    std::string line;
    if (!next_line(in, line)) throw ParseError(1, "missing header row");
    const auto header = split(line, ',');
    if (header.empty() || trim(header[0]) != "node") throw ParseError(1, "first column must be 'node'");
    const bool dynamic = header.size() > 1 && trim(header[1]) == "t";
    const std::size_t first = dynamic ? 2 : 1;
    if (header.size() - first != schema.size()) throw SchemaError("schema and header disagree on column count");
    for (std::size_t k = 0; k < schema.size(); ++k)
        if (trim(header[first + k]) != schema[k].first)
            throw SchemaError("header column '" + std::string(trim(header[first + k])) + "' not in schema order");

    FeatureBlock block;
    for (const auto& [name, kind] : schema) block.columns.push_back({name, kind, {}, {}});
    std::vector<Timestamp> first_seen(g.num_nodes(), std::numeric_limits<double>::infinity());
    for (const Event& e : g.events()) {
        first_seen[e.src] = std::min(first_seen[e.src], e.t);
        if (e.dst) first_seen[*e.dst] = std::min(first_seen[*e.dst], e.t);
    }
    if (!dynamic) {
        block.row_times = first_seen;
        for (auto& c : block.columns) {
            if (c.kind == ColumnKind::Numeric)
                c.values.assign(g.num_nodes(), std::nan(""));
            else
                c.categories.assign(g.num_nodes(), "");
        }
    }

    std::vector<NodeId> dynamic_ids;
    std::size_t line_no = 1;
    while (next_line(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto cells = split(line, ',');
        if (cells.size() != header.size()) throw ParseError(line_no, "wrong number of fields");
        const auto node = g.vocabulary().find(std::string(trim(cells[0])));
        if (!node) throw ParseError(line_no, "unknown node '" + std::string(trim(cells[0])) + "'");
        std::size_t row = *node;
        if (dynamic) {
            row = block.row_times.size();
            block.row_times.push_back(parse_real(cells[1], line_no, "timestamp"));
            dynamic_ids.push_back(*node);
        }
        for (std::size_t k = 0; k < schema.size(); ++k) {
            FeatureColumn& c = block.columns[k];
            const auto text = trim(cells[first + k]);
            if (c.kind == ColumnKind::Numeric) {
                const double x = text.empty() ? std::nan("") : parse_real(text, line_no, "feature");
                if (dynamic)
                    c.values.push_back(x);
                else
                    c.values[row] = x;
            } else {
                if (dynamic)
                    c.categories.emplace_back(text);
                else
                    c.categories[row] = std::string(text);
            }
        }
    }
    if (dynamic) {
        table.dynamic_nodes = std::move(block);
        table.dynamic_node_ids = std::move(dynamic_ids);
    } else {
        table.nodes = std::move(block);
    }
}

// ---------------------------------------------------------------------------
// Statistics

double edge_recurrence_ratio(const TemporalGraph& g, Directionality dir) {
    std::unordered_set<PairKey> seen;
    std::size_t adds = 0;
    std::size_t repeats = 0;
    for (const Event& e : g.events()) {
        if (e.kind != EventKind::EdgeAdd) continue;
        ++adds;
        if (!seen.insert(make_pair_key(e.src, *e.dst, dir)).second) ++repeats;
    }
    return adds == 0 ? 0.0 : static_cast<double>(repeats) / static_cast<double>(adds);
}

StatsBundle compute_stats(const TemporalGraph& g, const SnapshotSpec& spec) {
    StatsBundle s;
    s.num_nodes = g.num_nodes();
    s.num_events = g.num_events();
    for (const Event& e : g.events()) s.num_edge_adds += e.kind == EventKind::EdgeAdd;
    s.time_span = g.empty() ? 0.0 : g.t_max() - g.t_min();
    s.recurrence_ratio = edge_recurrence_ratio(g, spec.directionality);

    for (const Snapshot& snap : make_snapshots(g, spec)) {
        std::unordered_set<NodeId> touched;
        std::size_t weight = 0;
        for (const SnapshotEdge& e : snap.edges) {
            touched.insert(e.src);
            touched.insert(e.dst);
            weight += e.multiplicity;
        }
        s.snapshots.push_back({snap.index, snap.start, snap.end, touched.size(), snap.edges.size(), weight});
    }

    const Snapshot whole = to_static(g, Coalesce::Last, Directionality::Symmetrized);
    std::vector<std::set<NodeId>> neighbors(g.num_nodes());
    for (const SnapshotEdge& e : whole.edges) {
        neighbors[e.src].insert(e.dst);
        neighbors[e.dst].insert(e.src);
    }
    std::map<std::size_t, std::size_t> histogram;
    for (const auto& n : neighbors) ++histogram[n.size()];
    s.degree_histogram.assign(histogram.begin(), histogram.end());
    return s;
}

std::vector<std::filesystem::path> write_stats(const StatsBundle& stats, const std::filesystem::path& dir,
                                               const std::string& name) {
    std::vector<std::filesystem::path> written;

    std::string snaps = "index,start,end,active_nodes,edges,edge_events\n";
    for (const auto& s : stats.snapshots) {
        snaps += std::to_string(s.index) + "," + format_real(s.start) + "," + format_real(s.end) + "," +
                 std::to_string(s.active_nodes) + "," + std::to_string(s.edges) + "," + std::to_string(s.edge_events) +
                 "\n";
    }
    written.push_back(dir / (name + ".snapshots.csv"));
    write_text_file(written.back(), snaps);

    std::string degrees = "degree,nodes\n";
    for (const auto& [d, c] : stats.degree_histogram) degrees += std::to_string(d) + "," + std::to_string(c) + "\n";
    written.push_back(dir / (name + ".degrees.csv"));
    write_text_file(written.back(), degrees);

    std::string summary = "key,value\n";
    summary += "nodes," + std::to_string(stats.num_nodes) + "\n";
    summary += "events," + std::to_string(stats.num_events) + "\n";
    summary += "edge_adds," + std::to_string(stats.num_edge_adds) + "\n";
    summary += "time_span," + format_real(stats.time_span) + "\n";
    summary += "recurrence_ratio," + format_real(stats.recurrence_ratio) + "\n";
    summary += "snapshots," + std::to_string(stats.snapshots.size()) + "\n";
    written.push_back(dir / (name + ".summary.csv"));
    write_text_file(written.back(), summary);
    return written;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << content;
    if (!out) throw IoError("cannot write " + path.string());
}

}  // namespace tg
