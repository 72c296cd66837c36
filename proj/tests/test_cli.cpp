#include <gtest/gtest.h>

#include <sstream>

#include "test_util.hpp"
#include "tg/cli.hpp"
#include "tg/config.hpp"
#include "tg/errors.hpp"
#include "tg/io.hpp"
#include "tg/snapshot.hpp"
#include "tg/text.hpp"

using namespace tg;

namespace {

const char* kD0Csv = "src,dst,t\n0,1,1.0\n0,2,2.0\n1,2,3.0\n0,1,4.0\n2,3,5.0\n";

struct CliRun {
    int code;
    std::string out;
    std::string err;
};

CliRun cli(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) { return read_text_file(p); }

// A stream where later edges mostly repeat earlier ones, with a few labels.
std::string busy_csv() {
    std::string text = "src,dst,t,kind,label\n";
    for (int i = 0; i < 400; ++i) {
        const int u = (i * 7) % 23;
        const int v = (i * 11 + 3) % 29 + 23;
        text += std::to_string(u) + "," + std::to_string(v) + "," + std::to_string(i / 2) + ",add," +
                std::to_string(u % 3) + "\n";
    }
    return text;
}

}  // namespace

TEST(RunConfig, DefaultsAndTypedSet) {
    RunConfig c = RunConfig::defaults();
    EXPECT_EQ(c.get_int("seed"), 42);
    EXPECT_EQ(c.get_list("sampler.fanouts"), (std::vector<std::size_t>{10, 10}));
    c.set("split.train", "0.6");
    EXPECT_EQ(c.get_real("split.train"), 0.6);
    c.set("directed", "true");
    EXPECT_TRUE(c.get_bool("directed"));
    EXPECT_THROW(c.set("seed", "abc"), ConfigError);
    EXPECT_THROW(c.set("directed", "maybe"), ConfigError);
    EXPECT_THROW(c.set("sampler.fanouts", "1,x"), ConfigError);
    try {
        c.set("sampler.fanout", "3");
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        EXPECT_EQ(e.key(), "sampler.fanout");
    }
}

TEST(RunConfig, YamlRoundTrip) {
    RunConfig c = RunConfig::defaults();
    c.load_yaml("seed: 7\nsampler:\n  fanouts: [3, 2]\n  strategy: uniform\nsnapshot:\n  mode: fixed-width\n");
    EXPECT_EQ(c.get_int("seed"), 7);
    EXPECT_EQ(c.get_list("sampler.fanouts"), (std::vector<std::size_t>{3, 2}));
    RunConfig d = RunConfig::defaults();
    d.load_yaml(c.to_yaml());
    EXPECT_EQ(d.to_yaml(), c.to_yaml());
    EXPECT_THROW(d.load_yaml("sampler:\n  bogus: 1\n"), ConfigError);
}

TEST(Cli, UsageAndUnknownCommand) {
    EXPECT_EQ(cli({}).code, kExitValidation);
    EXPECT_EQ(cli({"--help"}).code, kExitOk);
    EXPECT_EQ(cli({"frobnicate", "x.csv"}).code, kExitValidation);
}

TEST(Cli, IngestWritesCacheAndManifest) {
    tgtest::TempDir dir("cli_ingest");
    write_text_file(dir / "d0.csv", kD0Csv);
    const CliRun r = cli({"ingest", (dir / "d0.csv").string(), "--out", (dir / "o").string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(read_cache(dir / "o/graph.tgev"), read_events_csv(dir / "d0.csv"));
    const std::string manifest = slurp(dir / "o/manifest.txt");
    EXPECT_NE(manifest.find("command ingest"), std::string::npos);
    EXPECT_NE(manifest.find("sha256=" + sha256_hex(kD0Csv)), std::string::npos);
    EXPECT_NE(manifest.find("output graph.tgev"), std::string::npos);
    EXPECT_NE(slurp(dir / "o/config.yaml").find("seed: 42"), std::string::npos);
}

TEST(Cli, ErrorsMapToExitCodes) {
    tgtest::TempDir dir("cli_errors");
    write_text_file(dir / "d0.csv", kD0Csv);
    const CliRun unknown = cli({"snapshot", (dir / "d0.csv").string(), "--out=" + (dir / "o").string(), "--kk=3"});
    EXPECT_EQ(unknown.code, kExitValidation);
    EXPECT_NE(unknown.err.find("kk"), std::string::npos);
    const CliRun bad_value = cli({"snapshot", (dir / "d0.csv").string(), "--out=" + (dir / "o").string(), "--k=0"});
    EXPECT_EQ(bad_value.code, kExitValidation);
    EXPECT_NE(bad_value.err.find("snapshot.k"), std::string::npos);
    const CliRun missing = cli({"stats", (dir / "nope.csv").string(), "--out=" + (dir / "o").string()});
    EXPECT_EQ(missing.code, kExitIo);
    write_text_file(dir / "bad.csv", "src,dst,t,extra\n");
    EXPECT_EQ(cli({"stats", (dir / "bad.csv").string(), "--out=" + (dir / "o").string()}).code, kExitValidation);
    EXPECT_EQ(cli({"stats", "--out=" + (dir / "o").string()}).code, kExitValidation);
}

TEST(Cli, SnapshotSingleWindowIsStatic) {
    tgtest::TempDir dir("cli_snapshot");
    write_text_file(dir / "d0.csv", kD0Csv);
    const CliRun r = cli({"snapshot", (dir / "d0.csv").string(), "--out", (dir / "o").string(), "--mode=fixed-count",
                       "--k=1"});
    ASSERT_EQ(r.code, 0) << r.err;
    const Dataset d = read_events_csv(dir / "d0.csv");
    std::string expected = "src,dst,weight,multiplicity,t\n";
    for (const auto& e : to_static(d.graph).edges)
        expected += d.graph.vocabulary().to_raw(e.src) + "," + d.graph.vocabulary().to_raw(e.dst) + "," +
                    format_real(e.weight) + "," + std::to_string(e.multiplicity) + "," + format_real(e.t) + "\n";
    EXPECT_EQ(slurp(dir / "o/snapshot_00000.csv"), expected);
    EXPECT_FALSE(std::filesystem::exists(dir / "o/snapshot_00001.csv"));
    EXPECT_NE(slurp(dir / "o/snapshots.csv").find("0,1,5,1,snapshot_00000.csv,4,5"), std::string::npos);
}

TEST(Cli, SampleDumpsExplicitSeeds) {
    tgtest::TempDir dir("cli_sample");
    write_text_file(dir / "d0.csv", kD0Csv);
    const CliRun r = cli({"sample", (dir / "d0.csv").string(), "--out", (dir / "o").string(), "--seeds=3@6",
                       "--fanouts=2,2", "--time_bound=edge"});
    ASSERT_EQ(r.code, 0) << r.err;
    const std::string samples = slurp(dir / "o/samples.csv");
    EXPECT_NE(samples.find("0,0,0,3,2,5,4,6\n"), std::string::npos) << samples;
    EXPECT_NE(samples.find("0,1,0,2,1,3,2,5\n"), std::string::npos) << samples;
    EXPECT_NE(samples.find("0,1,0,2,0,2,1,5\n"), std::string::npos) << samples;
    EXPECT_EQ(std::count(samples.begin(), samples.end(), '\n'), 4);
}

TEST(Cli, SplitNegativesAndStats) {
    tgtest::TempDir dir("cli_misc");
    write_text_file(dir / "g.csv", busy_csv());
    const std::string data = (dir / "g.csv").string();
    const std::string out = (dir / "o").string();
    ASSERT_EQ(cli({"split", data, "--out", out}).code, 0);
    EXPECT_NE(slurp(dir / "o/split.txt").find("t_train_end="), std::string::npos);
    ASSERT_EQ(cli({"negatives", data, "--out", out, "--strategy=historical", "--eval.batch_size=50"}).code, 0);
    EXPECT_NE(slurp(dir / "o/negatives.csv").find(",historical\n"), std::string::npos);
    ASSERT_EQ(cli({"stats", data, "--out", out, "--name=g"}).code, 0);
    EXPECT_TRUE(std::filesystem::exists(dir / "o/g.summary.csv"));
    ASSERT_EQ(cli({"eval-node", data, "--out", out}).code, 0);
    EXPECT_NE(slurp(dir / "o/metrics.txt").find("task=node"), std::string::npos);
}

TEST(Cli, EvalLinkIsDeterministicAndReplayable) {
    tgtest::TempDir dir("cli_eval");
    write_text_file(dir / "g.csv", busy_csv());
    const std::string data = (dir / "g.csv").string();
    const std::vector<std::string> args = {"eval-link", data, "--out", (dir / "a").string(),
                                           "--strategy=historical", "--batch_size=40", "--seed=9"};
    ASSERT_EQ(cli(args).code, 0);
    const std::string first = slurp(dir / "a/metrics.txt");
    const std::string manifest = slurp(dir / "a/manifest.txt");
    ASSERT_EQ(cli(args).code, 0);
    EXPECT_EQ(slurp(dir / "a/metrics.txt"), first);
    EXPECT_EQ(slurp(dir / "a/manifest.txt"), manifest);
    EXPECT_NE(first.find("negatives_historical="), std::string::npos);

    // re-running from the echoed config reproduces the metrics
    std::filesystem::copy_file(dir / "a/config.yaml", dir / "echo.yaml");
    ASSERT_EQ(cli({"eval-link", "--config=" + (dir / "echo.yaml").string(), "--out", (dir / "b").string()}).code, 0);
    EXPECT_EQ(slurp(dir / "b/metrics.txt"), first);

    // command line beats the config file
    write_text_file(dir / "over.yaml", "scorer: edgebank-tw\nedgebank:\n  window: 5\n");
    ASSERT_EQ(cli({"eval-link", data, "--config", (dir / "over.yaml").string(), "--out", (dir / "c").string(),
                   "--scorer=edgebank-inf"}).code,
              0);
    EXPECT_NE(slurp(dir / "c/config.yaml").find("scorer: \"edgebank-inf\""), std::string::npos);
}
