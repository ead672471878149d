#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rydsim/cli/config.hpp"
#include "rydsim/parallel.hpp"
#include "rydsim/table.hpp"

namespace rydsim::cli {

struct ScenarioOutput {
    Table trace;                                      // written as trace.csv
    std::vector<std::pair<std::string, Table>> extra;  // additional CSV files
    json results = json::object();                    // summary numbers for the manifest
    std::optional<json> ensemble;                     // sampling metadata sidecar
};

// Reads, defaults and validates the params section of a scenario.
void resolve_params(const std::string& scenario, Reader& params);

ScenarioOutput execute_scenario(const ScenarioConfig& config, const ParallelFor& parallel);

}  // namespace rydsim::cli
