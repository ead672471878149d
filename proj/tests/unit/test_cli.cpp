#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "rydsim/cli/config.hpp"
#include "rydsim/cli/manifest.hpp"
#include "rydsim/cli/plot.hpp"
#include "rydsim/cli/pool.hpp"
#include "rydsim/cli/scenarios.hpp"

using namespace rydsim;
using namespace rydsim::cli;
namespace fs = std::filesystem;

namespace {

class TempDir {
public:
    TempDir() {
        path_ = fs::temp_directory_path() / ("rydsim-test-" + std::to_string(std::rand()) + "-" +
                                             testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    const fs::path& path() const { return path_; }

private:
    fs::path path_;
};

json small_blockade() {
    return json::parse(R"({"scenario": "blockade-revivals", "seed": 9,
        "params": {"samples": 12, "time": {"stop_us": 10.0, "step_us": 0.05}}})");
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string config_error_key(const json& raw) {
    try {
        resolve_config(raw);
    } catch (const ConfigError& e) {
        return e.key();
    }
    return "<none>";
}

}  // namespace

TEST(Config, DefaultsAreResolved) {
    const auto cfg = resolve_config(json::parse(R"({"scenario": "chirp"})"));
    EXPECT_EQ(cfg.scenario, "chirp");
    EXPECT_EQ(cfg.seed, 1u);
    EXPECT_TRUE(cfg.params.contains("rabi_MHz"));
    const auto again = resolve_config(cfg.resolved());
    EXPECT_EQ(again.resolved(), cfg.resolved());
}

TEST(Config, EveryShippedConfigValidates) {
    int count = 0;
    for (const auto& entry : fs::directory_iterator(fs::path(RYDSIM_SOURCE_DIR) / "configs")) {
        EXPECT_NO_THROW(load_config(entry.path())) << entry.path();
        ++count;
    }
    EXPECT_GE(count, 10);
}

TEST(Config, ErrorsNameTheKey) {
    EXPECT_EQ(config_error_key(json::parse(R"({"scenario": "warp"})")), "scenario");
    EXPECT_EQ(config_error_key(json::parse(R"({"scenario": "chirp", "params": {"bogus": 1}})")), "params.bogus");
    EXPECT_EQ(config_error_key(json::parse(R"({"scenario": "chirp", "params": {"rabi_MHz": -1}})")),
              "params.rabi_MHz");
    EXPECT_EQ(config_error_key(json::parse(R"({"scenario": "chirp", "params": {"rabi_MHz": "fast"}})")),
              "params.rabi_MHz");
    EXPECT_EQ(config_error_key(json::parse(
                  R"({"scenario": "spectrum", "params": {"steps": [{}, {}, {"rabi_MHz": -2}]}})")),
              "params.steps[2].rabi_MHz");
    EXPECT_EQ(config_error_key(json::parse(R"({"scenario": "chirp", "extra": true})")), "extra");
}

TEST(Config, ParseErrorsCarryPosition) {
    try {
        parse_json("{\n  \"scenario\": \"chirp\",\n  oops\n}", "bad.json");
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("bad.json:3:"), std::string::npos) << e.what();
    }
}

TEST(Config, Overrides) {
    const auto cfg = load_config(fs::path(RYDSIM_SOURCE_DIR) / "configs" / "spectrum.json",
                                 {"params.steps[1].rabi_MHz=25", "params.method=fixed_step", "seed=5"});
    EXPECT_EQ(cfg.params["steps"][1]["rabi_MHz"], 25);
    EXPECT_EQ(cfg.params["method"], "fixed_step");
    EXPECT_EQ(cfg.seed, 5u);
    json raw = json::object();
    EXPECT_THROW(apply_override(raw, "no-equals-sign"), ConfigError);
}

TEST(Pool, RunsEveryIndexOnce) {
    const auto pool = make_thread_pool(8);
    std::vector<int> hits(1000, 0);
    pool(hits.size(), [&](std::size_t i) { hits[i] += 1; });
    for (int h : hits) EXPECT_EQ(h, 1);
    EXPECT_THROW(pool(10, [](std::size_t i) {
                     if (i == 7) throw std::runtime_error("boom");
                 }),
                 std::runtime_error);
}

TEST(Runs, WorkerCountDoesNotChangeResults) {
    const auto cfg = resolve_config(small_blockade());
    const auto serial = execute_scenario(cfg, make_thread_pool(1));
    const auto threaded = execute_scenario(cfg, make_thread_pool(8));
    EXPECT_EQ(to_csv(serial.trace), to_csv(threaded.trace));
    EXPECT_EQ(serial.results, threaded.results);
}

TEST(Runs, ManifestChecksumsAndReplay) {
    TempDir dir;
    const auto cfg = resolve_config(small_blockade());
    const auto first = run_scenario(cfg, {4, dir.path()});
    const json manifest = json::parse(read_file(first.directory / "manifest.json"));
    EXPECT_EQ(manifest["version"], tool_version);
    EXPECT_EQ(manifest["workers"], 4);
    for (const auto& [name, sum] : manifest["checksums"].items()) {
        ASSERT_TRUE(fs::exists(first.directory / name)) << name;
        EXPECT_EQ(sha256_file(first.directory / name), sum.get<std::string>()) << name;
    }
    EXPECT_TRUE(manifest["checksums"].contains("trace.csv"));
    EXPECT_TRUE(manifest["checksums"].contains("ensemble.json"));

    const auto replay_cfg = load_run_input(first.directory / "manifest.json");
    const auto second = run_scenario(replay_cfg, {1, dir.path()});
    EXPECT_NE(first.directory, second.directory);
    EXPECT_EQ(read_file(first.directory / "trace.csv"), read_file(second.directory / "trace.csv"));
    for (const auto& entry : fs::directory_iterator(dir.path() / first.directory.filename()))
        EXPECT_NE(entry.path().extension(), ".tmp");
}

TEST(Hashing, KnownDigest) {
    EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Plot, SeriesPerColumn) {
    Table t{{"t_us", "P0", "P1", "P2"}, {}};
    t.add_row({0.0, 1.0, 0.0, 0.0});
    t.add_row({1.0, 0.5, 0.4, 0.1});
    const std::string svg = render_svg(t, "x");
    std::size_t count = 0;
    for (auto pos = svg.find("class=\"series\""); pos != std::string::npos; pos = svg.find("class=\"series\"", pos + 1))
        ++count;
    EXPECT_EQ(count, 3u);
    EXPECT_NE(svg.find("P2"), std::string::npos);
}

TEST(Plot, SchemaChecks) {
    Table unknown{{"x", "y"}, {{0.0, 1.0}}};
    EXPECT_THROW(check_trace_schema(unknown), SchemaError);
    Table empty{{"t_us", "P0", "P1", "P2"}, {}};
    EXPECT_THROW(check_trace_schema(empty), SchemaError);
    Table nan{{"N", "P1"}, {{1.0, std::nan("")}}};
    EXPECT_THROW(check_trace_schema(nan), SchemaError);
    for (const auto& header : trace_schemas()) {
        Table ok{header, {std::vector<double>(header.size(), 0.5)}};
        EXPECT_NO_THROW(check_trace_schema(ok));
    }
}

TEST(Tool, ExitCodes) {
    TempDir dir;
    const std::string tool = RYDSIM_TOOL_PATH;
    const fs::path bad = dir.path() / "bad.json";
    std::ofstream(bad) << R"({"scenario": "chirp", "params": {"rabi_MHz": -1}})";
    const fs::path err = dir.path() / "err.txt";
    const int rc = std::system((tool + " validate " + bad.string() + " 2> " + err.string()).c_str());
    EXPECT_EQ(WEXITSTATUS(rc), 2);
    const json report = json::parse(read_file(err));
    EXPECT_EQ(report["key"], "params.rabi_MHz");
    EXPECT_EQ(report["error"], "config");

    const fs::path good = fs::path(RYDSIM_SOURCE_DIR) / "configs" / "chirp.json";
    EXPECT_EQ(WEXITSTATUS(std::system((tool + " validate " + good.string() + " > /dev/null").c_str())), 0);
    EXPECT_EQ(WEXITSTATUS(std::system((tool + " frobnicate 2> /dev/null").c_str())), 2);
}
