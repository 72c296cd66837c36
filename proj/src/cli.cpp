#include "tg/cli.hpp"

#include <algorithm>
#include <charconv>
#include <optional>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <map>
#include <openssl/evp.h>
#include <ostream>
#include <sstream>

#include "tg/config.hpp"
#include "tg/edgebank.hpp"
#include "tg/errors.hpp"
#include "tg/eval.hpp"
#include "tg/index.hpp"
#include "tg/io.hpp"
#include "tg/negatives.hpp"
#include "tg/rng.hpp"
#include "tg/sampling.hpp"
#include "tg/snapshot.hpp"
#include "tg/text.hpp"

namespace tg {

namespace fs = std::filesystem;

std::string sha256_hex(const std::string& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
    std::ostringstream hex;
    for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
    return hex.str();
}

namespace {

constexpr const char* kUsage =
    "usage: tgraph <command> [dataset] [--config=FILE] [--key.path=VALUE ...]\n"
    "commands: ingest stats snapshot split sample negatives eval-link eval-node\n";

struct Command {
    std::vector<std::string> sections;  // where bare override keys are looked up
    std::function<std::vector<fs::path>(const RunConfig&, const Dataset&, const fs::path&)> run;
};

// Everything a run needs besides the dataset.
struct Context {
    const RunConfig& config;
    Directionality dir;
    std::uint64_t seed;
};

Directionality directionality_of(const RunConfig& c) {
    return c.get_bool("directed") ? Directionality::Directed : Directionality::Symmetrized;
}

std::uint64_t seed_of(const RunConfig& c) { return static_cast<std::uint64_t>(c.get_int("seed")); }

std::size_t positive_count(const RunConfig& c, const std::string& key) {
    const auto v = c.get_int(key);
    if (v < 1) throw ConfigError(key, "must be at least 1");
    return static_cast<std::size_t>(v);
}

[[noreturn]] void bad_choice(const std::string& key, const std::string& value) {
    throw ConfigError(key, "unsupported value '" + value + "'");
}

SnapshotSpec snapshot_spec_of(const RunConfig& c) {
    SnapshotSpec spec;
    const auto mode = c.get_string("snapshot.mode");
    if (mode == "fixed-count")
        spec.mode = FixedCount{positive_count(c, "snapshot.k")};
    else if (mode == "fixed-width")
        spec.mode = FixedWidth{c.get_real("snapshot.width")};
    else if (mode == "fixed-events")
        spec.mode = FixedEvents{positive_count(c, "snapshot.events")};
    else
        bad_choice("snapshot.mode", mode);

    const auto coalesce = c.get_string("snapshot.coalesce");
    if (coalesce == "keep-all")
        spec.coalesce = Coalesce::KeepAll;
    else if (coalesce == "last")
        spec.coalesce = Coalesce::Last;
    else if (coalesce == "count-weight")
        spec.coalesce = Coalesce::CountWeight;
    else
        bad_choice("snapshot.coalesce", coalesce);

    const auto acc = c.get_string("snapshot.accumulation");
    if (acc == "interval")
        spec.accumulation = Accumulation::Interval;
    else if (acc == "cumulative")
        spec.accumulation = Accumulation::Cumulative;
    else
        bad_choice("snapshot.accumulation", acc);
    spec.directionality = directionality_of(c);
    check_spec(spec);
    return spec;
}

NegativeSpec negative_spec_of(const RunConfig& c) {
    NegativeSpec spec;
    const auto strategy = c.get_string("negatives.strategy");
    if (strategy == "random")
        spec.strategy = NegativeStrategy::Random;
    else if (strategy == "historical")
        spec.strategy = NegativeStrategy::Historical;
    else
        bad_choice("negatives.strategy", strategy);
    spec.per_positive = positive_count(c, "negatives.per_positive");
    const auto fallback = c.get_string("negatives.fallback");
    if (fallback == "to-random")
        spec.fallback = NegativeFallback::ToRandom;
    else if (fallback == "strict")
        spec.fallback = NegativeFallback::Strict;
    else
        bad_choice("negatives.fallback", fallback);
    const auto corrupt = c.get_string("negatives.corrupt");
    if (corrupt == "destination")
        spec.corruption = Corruption::Destination;
    else if (corrupt == "pair")
        spec.corruption = Corruption::Pair;
    else
        bad_choice("negatives.corrupt", corrupt);
    spec.seed = derive_seed(seed_of(c), "negatives");
    return spec;
}

SplitSpec split_spec_of(const RunConfig& c) {
    return {c.get_real("split.train"), c.get_real("split.val"), c.get_real("split.test")};
}

// ---------------------------------------------------------------------------

std::vector<fs::path> cmd_ingest(const RunConfig&, const Dataset& data, const fs::path& out) {
    std::vector<fs::path> written;
    written.push_back(out / "graph.tgev");
    write_cache(written.back(), data);

    std::ostringstream csv;
    write_events_csv(csv, data);
    written.push_back(out / "events.csv");
    write_text_file(written.back(), csv.str());

    const ValidationReport report = validate(data.graph);
    std::string text = "kind,event_id,message\n";
    for (const auto& f : report.findings) {
        const char* kind = f.kind == FindingKind::DeleteBeforeAdd      ? "delete_before_add"
                           : f.kind == FindingKind::EventOnDeletedNode ? "event_on_deleted_node"
                                                                       : "duplicate_event";
        text += std::string(kind) + "," + std::to_string(f.event_id) + "," + f.message + "\n";
    }
    written.push_back(out / "validation.csv");
    write_text_file(written.back(), text);
    return written;
}

std::vector<fs::path> cmd_stats(const RunConfig& c, const Dataset& data, const fs::path& out) {
    std::string name = c.get_string("stats.name");
    if (name.empty()) name = fs::path(c.get_string("dataset")).stem().string();
    return write_stats(compute_stats(data.graph, snapshot_spec_of(c)), out, name);
}

std::vector<fs::path> cmd_snapshot(const RunConfig& c, const Dataset& data, const fs::path& out) {
    const auto snaps = make_snapshots(data.graph, snapshot_spec_of(c));
    const auto& vocab = data.graph.vocabulary();
    std::vector<fs::path> written;
    std::string manifest = "index,start,end,end_inclusive,file,edges,edge_events\n";
    for (const Snapshot& s : snaps) {
        std::ostringstream name;
        name << "snapshot_" << std::setw(5) << std::setfill('0') << s.index << ".csv";
        std::string csv = "src,dst,weight,multiplicity,t\n";
        std::size_t units = 0;
        for (const SnapshotEdge& e : s.edges) {
            csv += vocab.to_raw(e.src) + "," + vocab.to_raw(e.dst) + "," + format_real(e.weight) + "," +
                   std::to_string(e.multiplicity) + "," + format_real(e.t) + "\n";
            units += e.multiplicity;
        }
        written.push_back(out / name.str());
        write_text_file(written.back(), csv);
        manifest += std::to_string(s.index) + "," + format_real(s.start) + "," + format_real(s.end) + "," +
                    (s.end_inclusive ? "1" : "0") + "," + name.str() + "," + std::to_string(s.edges.size()) + "," +
                    std::to_string(units) + "\n";
    }
    written.push_back(out / "snapshots.csv");
    write_text_file(written.back(), manifest);
    return written;
}

std::vector<fs::path> cmd_split(const RunConfig& c, const Dataset& data, const fs::path& out) {
    const TemporalGraph& g = data.graph;
    const SplitResult split = chronological_split(g, split_spec_of(c));
    std::size_t counts[3] = {0, 0, 0};
    std::string csv = "event_id,t,split,unseen\n";
    std::map<std::size_t, std::uint8_t> unseen;
    for (std::size_t i = 0; i < split.test_positions.size(); ++i) unseen[split.test_positions[i]] = split.test_unseen[i];
    static const char* names[] = {"train", "val", "test"};
    for (std::size_t i = 0; i < g.num_events(); ++i) {
        const auto tag = static_cast<std::size_t>(split.tags[i]);
        ++counts[tag];
        auto it = unseen.find(i);
        csv += std::to_string(g.event(i).id) + "," + format_real(g.event(i).t) + "," + names[tag] + "," +
               (it == unseen.end() ? "" : std::to_string(it->second)) + "\n";
    }
    std::string summary;
    summary += "t_train_end=" + format_real(split.t_train_end) + "\n";
    summary += "t_val_end=" + format_real(split.t_val_end) + "\n";
    summary += "train_events=" + std::to_string(counts[0]) + "\n";
    summary += "val_events=" + std::to_string(counts[1]) + "\n";
    summary += "test_events=" + std::to_string(counts[2]) + "\n";
    summary += "test_edges=" + std::to_string(split.test_positions.size()) + "\n";
    summary += "test_unseen_edges=" +
               std::to_string(std::count(split.test_unseen.begin(), split.test_unseen.end(), 1)) + "\n";
    std::vector<fs::path> written = {out / "split.txt", out / "split_events.csv"};
    write_text_file(written[0], summary);
    write_text_file(written[1], csv);
    return written;
}

SamplingStrategy strategy_of(const RunConfig& c) {
    const auto s = c.get_string("sampler.strategy");
    if (s == "most-recent") return MostRecent{};
    if (s == "uniform") {
        const double w = c.get_real("sampler.window");
        if (!(w > 0)) throw ConfigError("sampler.window", "must be positive");
        return UniformInWindow{w};
    }
    bad_choice("sampler.strategy", s);
}

std::vector<std::vector<SeedQuery>> seed_batches_of(const RunConfig& c, const TemporalGraph& g) {
    std::vector<std::vector<SeedQuery>> batches;
    const auto spec = c.get_string("sample.seeds");
    if (!spec.empty()) {
        std::vector<SeedQuery> seeds;
        for (auto item : split(spec, ',')) {
            item = trim(item);
            const auto at = item.rfind('@');
            if (at == std::string_view::npos) throw ConfigError("sample.seeds", "expected node@time items");
            const auto node = g.vocabulary().find(std::string(item.substr(0, at)));
            if (!node) throw ConfigError("sample.seeds", "unknown node '" + std::string(item.substr(0, at)) + "'");
            double t = 0;
            const auto time = item.substr(at + 1);
            const auto res = std::from_chars(time.data(), time.data() + time.size(), t);
            if (res.ec != std::errc() || res.ptr != time.data() + time.size())
                throw ConfigError("sample.seeds", "bad time '" + std::string(time) + "'");
            seeds.push_back({*node, t});
        }
        batches.push_back(std::move(seeds));
        return batches;
    }
    const auto limit = static_cast<std::size_t>(std::max<std::int64_t>(0, c.get_int("sample.max_batches")));
    for (const LinkWindow& w : iterate_link_batches(g, positive_count(c, "sample.batch_size"))) {
        if (limit && batches.size() == limit) break;
        std::vector<SeedQuery> seeds;
        for (std::size_t pos : w.positions) {
            const Event& e = g.event(pos);
            seeds.push_back({e.src, e.t});
            seeds.push_back({*e.dst, e.t});
        }
        batches.push_back(std::move(seeds));
    }
    return batches;
}

std::vector<fs::path> cmd_sample(const RunConfig& c, const Dataset& data, const fs::path& out) {
    const TemporalGraph& g = data.graph;
    const TemporalAdjacency idx = build_index(g, directionality_of(c));
    const SamplingStrategy strategy = strategy_of(c);
    const auto fanouts = c.get_list("sampler.fanouts");
    KHopOptions options;
    const auto bound = c.get_string("sampler.time_bound");
    if (bound == "seed")
        options.time_bound = TimeBound::SeedTime;
    else if (bound == "edge")
        options.time_bound = TimeBound::EdgeTime;
    else
        bad_choice("sampler.time_bound", bound);

    const auto& vocab = g.vocabulary();
    const std::uint64_t base = derive_seed(seed_of(c), "sampler");
    std::string seeds_csv = "batch,seed,node,t\n";
    std::string nodes_csv = "batch,local,node\n";
    std::string edges_csv = "batch,hop,seed,src,dst,t,event_id,query_t\n";
    const auto batches = seed_batches_of(c, g);
    for (std::size_t b = 0; b < batches.size(); ++b) {
        const TemporalBatch batch = sample_khop(idx, batches[b], fanouts, strategy, splitmix64(base + b), options);
        const std::string prefix = std::to_string(b) + ",";
        for (std::size_t s = 0; s < batch.seeds.size(); ++s)
            seeds_csv += prefix + std::to_string(s) + "," + vocab.to_raw(batch.seeds[s].node) + "," +
                         format_real(batch.seeds[s].t) + "\n";
        for (std::size_t l = 0; l < batch.node_map.size(); ++l)
            nodes_csv += prefix + std::to_string(l) + "," + vocab.to_raw(batch.node_map[l]) + "\n";
        for (std::size_t h = 0; h < batch.hops.size(); ++h) {
            for (const BatchEdge& e : batch.hops[h]) {
                edges_csv += prefix + std::to_string(h) + "," + std::to_string(e.seed) + "," +
                             vocab.to_raw(batch.node_map[e.local_src]) + "," +
                             vocab.to_raw(batch.node_map[e.local_dst]) + "," + format_real(e.t) + "," +
                             std::to_string(e.event_id) + "," + format_real(e.query_t) + "\n";
            }
        }
    }
    std::vector<fs::path> written = {out / "sample_seeds.csv", out / "sample_nodes.csv", out / "samples.csv"};
    write_text_file(written[0], seeds_csv);
    write_text_file(written[1], nodes_csv);
    write_text_file(written[2], edges_csv);
    return written;
}

std::vector<fs::path> cmd_negatives(const RunConfig& c, const Dataset& data, const fs::path& out) {
    const TemporalGraph& g = data.graph;
    const NegativeSpec spec = negative_spec_of(c);
    StreamingNegativeSampler sampler(g, spec, directionality_of(c));
    const auto& vocab = g.vocabulary();
    std::string csv = "src,dst,window_start,window_end,strategy\n";
    const auto windows = iterate_link_batches(g, positive_count(c, "eval.batch_size"));
    for (std::size_t b = 0; b < windows.size(); ++b) {
        const LinkWindow& w = windows[b];
        std::vector<NodePair> positives;
        for (std::size_t pos : w.positions) positives.emplace_back(g.event(pos).src, *g.event(pos).dst);
        const NegativeSample sample = sampler.draw({w.t_start, w.t_end}, positives, b);
        const std::size_t historical =
            spec.strategy == NegativeStrategy::Historical ? sample.pairs.size() - sample.topped_up : 0;
        for (std::size_t j = 0; j < sample.pairs.size(); ++j) {
            csv += vocab.to_raw(sample.pairs[j].first) + "," + vocab.to_raw(sample.pairs[j].second) + "," +
                   format_real(w.t_start) + "," + format_real(w.t_end) + "," +
                   (j < historical ? "historical" : "random") + "\n";
        }
    }
    std::vector<fs::path> written = {out / "negatives.csv"};
    write_text_file(written[0], csv);
    return written;
}

std::vector<fs::path> write_report(const MetricsReport& report, const fs::path& out) {
    std::vector<fs::path> written = {out / "metrics.txt", out / "metrics.csv"};
    write_text_file(written[0], report.to_key_value());
    write_text_file(written[1], report.csv_header() + report.csv_row());
    return written;
}

std::vector<fs::path> cmd_eval_link(const RunConfig& c, const Dataset& data, const fs::path& out) {
    const TemporalGraph& g = data.graph;
    const SplitResult split = chronological_split(g, split_spec_of(c));
    const Directionality dir = directionality_of(c);
    const auto name = c.get_string("scorer");
    EdgeBankVariant variant = EdgeBankInfinite{};
    if (name == "edgebank-tw") {
        double w = c.get_real("edgebank.window");
        if (w == 0) w = split.t_train_end - g.t_min();
        if (!(w > 0)) throw ConfigError("edgebank.window", "must be positive");
        variant = EdgeBankTimeWindow{w};
    } else if (name != "edgebank-inf") {
        bad_choice("scorer", name);
    }
    EdgeBankScorer scorer{EdgeBank(variant, dir)};
    LinkEvalOptions options;
    options.batch_size = positive_count(c, "eval.batch_size");
    options.directionality = dir;
    return write_report(evaluate_link_prediction(g, split, scorer, negative_spec_of(c), options), out);
}

std::vector<fs::path> cmd_eval_node(const RunConfig& c, const Dataset& data, const fs::path& out) {
    const TemporalGraph& g = data.graph;
    const SplitResult split = chronological_split(g, split_spec_of(c));
    const auto name = c.get_string("node.classifier");
    if (name != "persistence") bad_choice("node.classifier", name);
    PersistenceClassifier classifier;
    const bool dynamic = c.get_bool("node.dynamic");
    const auto labels = labels_from_events(g, dynamic);
    return write_report(evaluate_node_classification(g, labels, split, classifier, dynamic), out);
}

const std::map<std::string, Command>& commands() {
    static const std::map<std::string, Command> table = {
        {"ingest", {{}, cmd_ingest}},
        {"stats", {{"stats", "snapshot"}, cmd_stats}},
        {"snapshot", {{"snapshot"}, cmd_snapshot}},
        {"split", {{"split"}, cmd_split}},
        {"sample", {{"sample", "sampler"}, cmd_sample}},
        {"negatives", {{"negatives"}, cmd_negatives}},
        {"eval-link", {{"eval", "negatives", "edgebank"}, cmd_eval_link}},
        {"eval-node", {{"node", "eval"}, cmd_eval_node}},
    };
    return table;
}

std::string resolve_key(const RunConfig& config, const Command& command, const std::string& key) {
    if (config.has(key)) return key;
    for (const auto& section : command.sections)
        if (config.has(section + "." + key)) return section + "." + key;
    throw ConfigError(key, "unknown config key");
}

std::string manifest_line(const std::string& role, const std::string& name, const fs::path& path) {
    const std::string bytes = read_text_file(path);
    return role + " " + name + " sha256=" + sha256_hex(bytes) + " bytes=" + std::to_string(bytes.size()) + "\n";
}

int run(std::span<const std::string> args, std::ostream& out) {
    if (args.empty() || args[0] == "--help" || args[0] == "-h") {
        out << kUsage;
        return args.empty() ? kExitValidation : kExitOk;
    }
    const auto& table = commands();
    const auto it = table.find(args[0]);
    if (it == table.end()) throw ConfigError("<command>", "unknown command '" + args[0] + "'");
    const Command& command = it->second;

    RunConfig config = RunConfig::defaults();
    std::vector<std::pair<std::string, std::string>> overrides;
    std::optional<std::string> config_path;
    for (std::size_t i = 1; i < args.size(); ++i) {
        const std::string& a = args[i];
        if (a.rfind("--", 0) != 0) {
            overrides.emplace_back("dataset", a);
            continue;
        }
        std::string key = a.substr(2);
        std::string value;
        const auto eq = key.find('=');
        if (eq != std::string::npos) {
            value = key.substr(eq + 1);
            key = key.substr(0, eq);
        } else if (i + 1 < args.size() && args[i + 1].rfind("--", 0) != 0) {
            value = args[++i];
        } else {
            value = "true";
        }
        if (key == "config")
            config_path = value;
        else
            overrides.emplace_back(key, value);
    }
    if (config_path) config.load_file(*config_path);
    for (const auto& [key, value] : overrides) config.set(resolve_key(config, command, key), value);

    const std::string dataset = config.get_string("dataset");
    if (dataset.empty()) throw ConfigError("dataset", "no dataset given");
    const fs::path out_dir = config.get_string("out");
    fs::create_directories(out_dir);

    const Dataset data = load_dataset(dataset);
    std::vector<fs::path> outputs = command.run(config, data, out_dir);

    const fs::path echo = out_dir / "config.yaml";
    write_text_file(echo, config.to_yaml());
    outputs.push_back(echo);

    std::string manifest = "command " + args[0] + "\n";
    manifest += manifest_line("input", dataset, dataset);
    if (config_path) manifest += manifest_line("config", *config_path, *config_path);
    for (const auto& p : outputs) manifest += manifest_line("output", p.filename().string(), p);
    write_text_file(out_dir / "manifest.txt", manifest);

    for (const auto& p : outputs) out << p.string() << "\n";
    return kExitOk;
}

}  // namespace

int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
    try {
        return run(args, out);
    } catch (const ConfigError& e) {
        err << "error: config " << e.what() << "\n";
        return kExitValidation;
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        // argument, parse, ingest, schema, split, cache and metric errors
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    }
}

}  // namespace tg
