#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "cruler/config.hpp"

namespace cruler {

inline constexpr const char* kLibraryVersion = "0.1.0";

struct RunOutcome {
    int exit_code = 0; // 0 ok, 1 config error, 2 tolerance failure
    std::vector<std::string> report_paths;
};

// Executes every experiment in the config, writes one JSON report per
// experiment (plus CSV side files) under the output directory, and returns
// the combined verdict. Experiments may run in parallel (jobs > 1); report
// assembly is ordered by experiment name.
RunOutcome run_experiments(const RunConfig& config, const std::string& output_override = "",
                           int jobs_override = 0, const std::string& profile_override = "");

// Single-experiment entry points used by the CLI subcommands.
nlohmann::json run_sigma_scan(const RunConfig& config, const std::string& ruler_name,
                              int grid_n, const std::string& out_dir);
nlohmann::json run_embed(const RunConfig& config, const std::string& out_dir);
nlohmann::json run_oracle_compare(const RunConfig& config);

} // namespace cruler
