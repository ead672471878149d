#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>

#include "rydsim/cli/config.hpp"

namespace rydsim::cli {

inline constexpr const char* tool_version = "0.1.0";

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::filesystem::path& path);

// Writes to a sibling temporary file and renames it over the target.
void write_atomic(const std::filesystem::path& path, const std::string& content);

struct RunManifest {
    json config;  // resolved snapshot
    std::string version = tool_version;
    std::string started_utc;
    double wall_clock_s = 0.0;
    std::size_t workers = 1;
    std::map<std::string, std::string> checksums;  // file name -> SHA-256
    json results = json::object();

    json to_json() const;
};

struct RunOptions {
    std::size_t workers = 1;
    std::filesystem::path output_dir;  // overrides the config when set
};

struct RunResult {
    std::filesystem::path directory;
    RunManifest manifest;
};

// Executes the scenario and writes trace.csv, config.json, optional
// ensemble.json and plot.svg, and finally manifest.json.
RunResult run_scenario(const ScenarioConfig& config, const RunOptions& options);

// Accepts either a config file or a manifest (its snapshot is used).
ScenarioConfig load_run_input(const std::filesystem::path& path, const std::vector<std::string>& overrides = {});

}  // namespace rydsim::cli
