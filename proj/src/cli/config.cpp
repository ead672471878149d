#include "rydsim/cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "rydsim/cli/scenarios.hpp"
#include "rydsim/table.hpp"

namespace rydsim::cli {

Reader::Reader(const json& raw, json& resolved, std::string path)
    : raw_(&raw), resolved_(&resolved), path_(std::move(path)) {
    if (!raw.is_object()) fail("", "expected an object");
    if (!resolved.is_object()) resolved = json::object();
}

std::string Reader::key_path(const std::string& key) const {
    if (key.empty()) return path_;
    return path_.empty() ? key : path_ + "." + key;
}

void Reader::fail(const std::string& key, const std::string& message) const {
    throw ConfigError(key_path(key), message);
}

bool Reader::has(const std::string& key) const {
    return raw_->contains(key) && !(*raw_)[key].is_null();
}

const json& Reader::value(const std::string& key) {
    consumed_.push_back(key);
    return (*raw_)[key];
}

double Reader::number(const std::string& key, double fallback) {
    double v = fallback;
    if (has(key)) {
        const json& node = value(key);
        if (!node.is_number()) fail(key, "expected a number");
        v = node.get<double>();
    } else {
        consumed_.push_back(key);
    }
    if (!std::isfinite(v)) fail(key, "must be finite");
    (*resolved_)[key] = v;
    return v;
}

double Reader::number_at_least(const std::string& key, double fallback, double minimum) {
    const double v = number(key, fallback);
    if (v < minimum) fail(key, "must be >= " + format_number(minimum));
    return v;
}

double Reader::number_above(const std::string& key, double fallback, double minimum) {
    const double v = number(key, fallback);
    if (v <= minimum) fail(key, "must be > " + format_number(minimum));
    return v;
}

std::int64_t Reader::integer(const std::string& key, std::int64_t fallback, std::int64_t minimum,
                             std::int64_t maximum) {
    std::int64_t v = fallback;
    if (has(key)) {
        const json& node = value(key);
        if (!node.is_number_integer()) fail(key, "expected an integer");
        v = node.get<std::int64_t>();
    } else {
        consumed_.push_back(key);
    }
    if (v < minimum || v > maximum)
        fail(key, "must lie in [" + std::to_string(minimum) + ", " + std::to_string(maximum) + "]");
    (*resolved_)[key] = v;
    return v;
}

std::uint64_t Reader::unsigned_integer(const std::string& key, std::uint64_t fallback) {
    std::uint64_t v = fallback;
    if (has(key)) {
        const json& node = value(key);
        if (!node.is_number_unsigned()) fail(key, "expected a non-negative integer");
        v = node.get<std::uint64_t>();
    } else {
        consumed_.push_back(key);
    }
    (*resolved_)[key] = v;
    return v;
}

bool Reader::boolean(const std::string& key, bool fallback) {
    bool v = fallback;
    if (has(key)) {
        const json& node = value(key);
        if (!node.is_boolean()) fail(key, "expected true or false");
        v = node.get<bool>();
    } else {
        consumed_.push_back(key);
    }
    (*resolved_)[key] = v;
    return v;
}

std::string Reader::choice(const std::string& key, const std::string& fallback,
                           std::initializer_list<const char*> allowed) {
    std::string v = fallback;
    if (has(key)) {
        const json& node = value(key);
        if (!node.is_string()) fail(key, "expected a string");
        v = node.get<std::string>();
    } else {
        consumed_.push_back(key);
    }
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return v == a; })) {
        std::string list;
        for (const char* a : allowed) list += (list.empty() ? "" : ", ") + std::string(a);
        fail(key, "must be one of " + list);
    }
    (*resolved_)[key] = v;
    return v;
}

std::vector<double> Reader::numbers(const std::string& key, const std::vector<double>& fallback) {
    std::vector<double> v = fallback;
    if (has(key)) {
        const json& node = value(key);
        if (!node.is_array()) fail(key, "expected an array of numbers");
        v.clear();
        for (const auto& item : node) {
            if (!item.is_number()) fail(key, "expected an array of numbers");
            v.push_back(item.get<double>());
        }
    } else {
        consumed_.push_back(key);
    }
    if (v.empty()) fail(key, "must not be empty");
    for (double x : v)
        if (!std::isfinite(x)) fail(key, "must be finite");
    (*resolved_)[key] = v;
    return v;
}

Reader Reader::child(const std::string& key) {
    static const json empty = json::object();
    const json* node = &empty;
    if (has(key)) {
        node = &value(key);
        if (!node->is_object()) fail(key, "expected an object");
    } else {
        consumed_.push_back(key);
    }
    json& out = (*resolved_)[key];
    out = json::object();
    return Reader(*node, out, key_path(key));
}

std::vector<Reader> Reader::children(const std::string& key, const json& fallback) {
    const json* node = &fallback;
    if (has(key)) {
        node = &value(key);
        if (!node->is_array() || node->size() != fallback.size())
            fail(key, "expected an array of " + std::to_string(fallback.size()) + " objects");
    } else {
        consumed_.push_back(key);
    }
    json& out = (*resolved_)[key];
    out = json::array();
    for (std::size_t i = 0; i < node->size(); ++i) out.push_back(json::object());
    std::vector<Reader> readers;
    for (std::size_t i = 0; i < node->size(); ++i) {
        const std::string path = key_path(key) + "[" + std::to_string(i) + "]";
        if (!(*node)[i].is_object()) throw ConfigError(path, "expected an object");
        readers.emplace_back((*node)[i], out[i], path);
    }
    return readers;
}

void Reader::finish() const {
    for (const auto& [key, _] : raw_->items())
        if (std::find(consumed_.begin(), consumed_.end(), key) == consumed_.end())
            throw ConfigError(key_path(key), "unknown key");
}

json ScenarioConfig::resolved() const {
    json out = json::object();
    out["scenario"] = scenario;
    out["seed"] = seed;
    out["output_dir"] = output_dir;
    out["plot"] = plot;
    out["params"] = params;
    return out;
}

json parse_json(const std::string& text, const std::string& source) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        const std::size_t offset = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        std::size_t line = 1;
        std::size_t column = 1;
        for (std::size_t i = 0; i < offset; ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw ConfigError("", source + ":" + std::to_string(line) + ":" + std::to_string(column) +
                                  ": parse error: " + e.what());
    }
}

namespace {

std::vector<std::string> split_path(const std::string& path) {
    std::vector<std::string> parts;
    std::string current;
    for (std::size_t i = 0; i < path.size(); ++i) {
        const char c = path[i];
        if (c == '.') {
            if (!current.empty()) parts.push_back(current);
            current.clear();
        } else if (c == '[') {
            if (!current.empty()) parts.push_back(current);
            current.clear();
            const std::size_t close = path.find(']', i);
            if (close == std::string::npos) throw ConfigError(path, "unbalanced '[' in override path");
            parts.push_back(path.substr(i + 1, close - i - 1));
            i = close;
        } else {
            current += c;
        }
    }
    if (!current.empty()) parts.push_back(current);
    return parts;
}

}  // namespace

void apply_override(json& raw, const std::string& assignment) {
    const std::size_t eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError(assignment, "override must look like path=value");
    const std::string path = assignment.substr(0, eq);
    const std::string text = assignment.substr(eq + 1);
    json value;
    try {
        value = json::parse(text);
    } catch (const json::parse_error&) {
        value = text;
    }
    if (value.is_structured()) throw ConfigError(path, "overrides must be scalar");

    json* node = &raw;
    const auto parts = split_path(path);
    if (parts.empty()) throw ConfigError(path, "empty override path");
    for (std::size_t i = 0; i < parts.size(); ++i) {
        const std::string& part = parts[i];
        const bool last = i + 1 == parts.size();
        if (node->is_array()) {
            std::size_t index = 0;
            try {
                index = std::stoul(part);
            } catch (const std::exception&) {
                throw ConfigError(path, "array index expected at '" + part + "'");
            }
            if (index >= node->size()) throw ConfigError(path, "array index out of range");
            node = &(*node)[index];
        } else {
            if (node->is_null()) *node = json::object();
            if (!node->is_object()) throw ConfigError(path, "cannot descend into scalar at '" + part + "'");
            node = &(*node)[part];
        }
        if (last && node->is_structured()) throw ConfigError(path, "overrides must target scalar leaves");
    }
    *node = value;
}

ScenarioConfig resolve_config(const json& raw) {
    json top_resolved = json::object();
    Reader top(raw, top_resolved, "");
    ScenarioConfig config;
    if (!top.has("scenario")) throw ConfigError("scenario", "required");
    config.scenario = top.choice("scenario", "", {"spectrum", "doppler", "foerster-scan", "foerster-time",
                                                  "rf-floquet", "blockade-revivals", "chirp", "stirap",
                                                  "gate-sim", "mesoscopic-gate"});
    config.seed = top.unsigned_integer("seed", 1);
    if (top.has("output_dir") && !raw["output_dir"].is_string()) throw ConfigError("output_dir", "expected a string");
    config.output_dir = raw.value("output_dir", std::string("runs"));
    if (config.output_dir.empty()) throw ConfigError("output_dir", "must not be empty");
    top.choice("output_dir", config.output_dir, {config.output_dir.c_str()});
    config.plot = top.boolean("plot", true);

    Reader params = top.child("params");
    resolve_params(config.scenario, params);
    params.finish();
    top.finish();
    config.params = top_resolved["params"];
    return config;
}

ScenarioConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("", "cannot open config file " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    json raw = parse_json(buffer.str(), path.string());
    if (!raw.is_object()) throw ConfigError("", path.string() + ": top level must be an object");
    for (const auto& assignment : overrides) apply_override(raw, assignment);
    return resolve_config(raw);
}

}  // namespace rydsim::cli
