#pragma once

#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "rydsim/error.hpp"

namespace rydsim::cli {

using json = nlohmann::json;

class ConfigError : public Error {
public:
    ConfigError(std::string key, const std::string& message)
        : Error(key.empty() ? message : key + ": " + message), key_(std::move(key)) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

// Reads keys out of a raw JSON object while building the resolved (defaulted)
// tree; any key never read is reported by finish(). Children are finished
// by their callers.
class Reader {
public:
    Reader(const json& raw, json& resolved, std::string path);

    double number(const std::string& key, double fallback);
    double number_at_least(const std::string& key, double fallback, double minimum);
    double number_above(const std::string& key, double fallback, double minimum);
    std::int64_t integer(const std::string& key, std::int64_t fallback, std::int64_t minimum, std::int64_t maximum);
    std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback);
    bool boolean(const std::string& key, bool fallback);
    std::string choice(const std::string& key, const std::string& fallback, std::initializer_list<const char*> allowed);
    std::vector<double> numbers(const std::string& key, const std::vector<double>& fallback);
    bool has(const std::string& key) const;

    Reader child(const std::string& key);
    // Array of objects; fallback (which must outlive the readers) is used when absent.
    std::vector<Reader> children(const std::string& key, const json& fallback);

    void finish() const;

    std::string key_path(const std::string& key) const;
    [[noreturn]] void fail(const std::string& key, const std::string& message) const;

private:
    const json& value(const std::string& key);

    const json* raw_;
    json* resolved_;
    std::string path_;
    std::vector<std::string> consumed_;
};

inline const std::vector<std::string>& scenario_names() {
    static const std::vector<std::string> names{"spectrum",          "doppler", "foerster-scan", "foerster-time",
                                                "rf-floquet",        "blockade-revivals", "chirp", "stirap",
                                                "gate-sim",          "mesoscopic-gate"};
    return names;
}

struct ScenarioConfig {
    std::string scenario;
    std::uint64_t seed = 1;
    std::string output_dir = "runs";
    bool plot = true;
    json params;  // resolved scenario parameters

    json resolved() const;  // whole-file form, reloadable
};

// Parses text into JSON, reporting syntax errors with line and column.
json parse_json(const std::string& text, const std::string& source);

// Applies "a.b[2].c=value" overrides; values are parsed as JSON when possible.
void apply_override(json& raw, const std::string& assignment);

ScenarioConfig resolve_config(const json& raw);
ScenarioConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides = {});

}  // namespace rydsim::cli
