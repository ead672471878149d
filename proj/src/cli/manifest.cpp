#include "rydsim/cli/manifest.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <memory>
#include <sstream>

#include "rydsim/cli/plot.hpp"
#include "rydsim/cli/pool.hpp"
#include "rydsim/cli/scenarios.hpp"

namespace rydsim::cli {

std::string sha256_hex(const std::string& bytes) {
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
        EVP_DigestFinal_ex(ctx.get(), digest, &length) != 1)
        throw Error("SHA-256 computation failed");
    std::ostringstream hex;
    for (unsigned int i = 0; i < length; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
    return hex.str();
}

std::string sha256_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return sha256_hex(buffer.str());
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out) throw Error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

json RunManifest::to_json() const {
    return {{"rydsim_manifest", 1},
            {"version", version},
            {"started_utc", started_utc},
            {"wall_clock_s", wall_clock_s},
            {"workers", workers},
            {"checksums", checksums},
            {"results", results},
            {"config", config}};
}

namespace {

std::string utc_stamp(std::chrono::system_clock::time_point t, const char* format) {
    const std::time_t tt = std::chrono::system_clock::to_time_t(t);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    std::ostringstream s;
    s << std::put_time(&tm, format);
    return s.str();
}

std::filesystem::path make_run_directory(const std::filesystem::path& root, const std::string& scenario,
                                         std::chrono::system_clock::time_point now) {
    std::filesystem::create_directories(root);
    const std::string base = scenario + "-" + utc_stamp(now, "%Y%m%dT%H%M%SZ");
    for (int suffix = 0;; ++suffix) {
        const auto dir = root / (suffix == 0 ? base : base + "-" + std::to_string(suffix));
        if (std::filesystem::create_directory(dir)) return dir;
    }
}

}  // namespace

RunResult run_scenario(const ScenarioConfig& config, const RunOptions& options) {
    const auto started = std::chrono::system_clock::now();
    const auto clock0 = std::chrono::steady_clock::now();

    ScenarioOutput output = execute_scenario(config, make_thread_pool(options.workers));

    RunResult result;
    const std::filesystem::path root =
        options.output_dir.empty() ? std::filesystem::path(config.output_dir) : options.output_dir;
    result.directory = make_run_directory(root, config.scenario, started);
    RunManifest& manifest = result.manifest;
    manifest.config = config.resolved();
    manifest.started_utc = utc_stamp(started, "%Y-%m-%dT%H:%M:%SZ");
    manifest.workers = options.workers;
    manifest.results = output.results;

    auto emit = [&](const std::string& name, const std::string& content) {
        write_atomic(result.directory / name, content);
        manifest.checksums[name] = sha256_hex(content);
    };
    emit("trace.csv", to_csv(output.trace));
    for (const auto& [name, table] : output.extra) emit(name, to_csv(table));
    emit("config.json", manifest.config.dump(2) + "\n");
    if (output.ensemble) emit("ensemble.json", output.ensemble->dump(2) + "\n");
    if (config.plot) emit("plot.svg", render_svg(output.trace, config.scenario));

    manifest.wall_clock_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - clock0).count();
    write_atomic(result.directory / "manifest.json", manifest.to_json().dump(2) + "\n");
    return result;
}

ScenarioConfig load_run_input(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("", "cannot open config file " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    json raw = parse_json(buffer.str(), path.string());
    if (!raw.is_object()) throw ConfigError("", path.string() + ": top level must be an object");
    if (raw.contains("rydsim_manifest")) {
        if (!raw.contains("config") || !raw["config"].is_object()) throw ConfigError("config", "manifest has no config snapshot");
        json snapshot = raw["config"];
        raw = std::move(snapshot);
    }
    for (const auto& assignment : overrides) apply_override(raw, assignment);
    return resolve_config(raw);
}

}  // namespace rydsim::cli
