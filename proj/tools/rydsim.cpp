#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "rydsim/cli/config.hpp"
#include "rydsim/cli/manifest.hpp"
#include "rydsim/cli/plot.hpp"
#include "rydsim/cli/pool.hpp"

namespace {

constexpr int exit_config = 2;
constexpr int exit_numeric = 3;

int report(const char* kind, const std::string& message, const std::string& key, int code) {
    rydsim::cli::json err = {{"error", kind}, {"message", message}};
    if (!key.empty()) err["key"] = key;
    std::cerr << err.dump() << "\n";
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    using namespace rydsim::cli;

    CLI::App app{"Rydberg-atom simulation scenarios"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(tool_version));

    std::string config_path;
    std::vector<std::string> overrides;
    std::size_t workers = default_worker_count();
    std::string output_dir;

    auto* run = app.add_subcommand("run", "run a scenario config (or re-run a manifest)");
    run->add_option("config", config_path, "config or manifest JSON")->required();
    run->add_option("--set", overrides, "override a scalar leaf, path=value");
    run->add_option("-j,--workers", workers, "worker threads (default: RYDSIM_WORKERS or hardware)")
        ->check(CLI::PositiveNumber);
    run->add_option("-o,--output-dir", output_dir, "output root, overrides the config");

    auto* validate = app.add_subcommand("validate", "resolve a config and print it");
    validate->add_option("config", config_path, "config JSON")->required();
    validate->add_option("--set", overrides, "override a scalar leaf, path=value");

    std::string csv_path;
    std::string svg_path;
    auto* plot = app.add_subcommand("plot", "render a trace CSV as SVG");
    plot->add_option("csv", csv_path, "trace CSV")->required();
    plot->add_option("-o,--output", svg_path, "SVG path (default: alongside the CSV)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return report("usage", e.what(), "", exit_config);
    }

    try {
        if (*run) {
            const ScenarioConfig config = load_run_input(config_path, overrides);
            const RunResult result = run_scenario(config, {workers, output_dir});
            std::cout << result.directory.string() << "\n";
        } else if (*validate) {
            const ScenarioConfig config = load_run_input(config_path, overrides);
            std::cout << config.resolved().dump(2) << "\n";
        } else if (*plot) {
            std::cout << emit_plot(csv_path, svg_path).string() << "\n";
        }
    } catch (const ConfigError& e) {
        return report("config", e.what(), e.key(), exit_config);
    } catch (const SchemaError& e) {
        return report("schema", e.what(), "", exit_config);
    } catch (const rydsim::IntegrationError& e) {
        return report("numeric", e.what(), "", exit_numeric);
    } catch (const std::exception& e) {
        return report("failure", e.what(), "", exit_numeric);
    }
    return 0;
}
