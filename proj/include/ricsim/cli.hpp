#pragma once

#include "ricsim/scenario.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ricsim::cli
{
    inline constexpr const char *out_dir_env = "RICSIM_OUT_DIR";

    enum class ExitCode : int
    {
        Ok = 0,
        ValidationFailed = 1,
        RunFailed = 2,
        UsageError = 64,
    };

    struct RunOptions
    {
        std::filesystem::path scenario_path;
        std::string method = "";        // nswf | eg | am | all; empty = scenario's own
        std::optional<int> samples;
        std::optional<std::filesystem::path> out_dir;
        int verbosity = 0;
    };

    /// Empty when the scenario file parses and validates.
    std::vector<Diagnostic> cmd_validate(const std::filesystem::path &scenario_path);

    /// --out, else $RICSIM_OUT_DIR, else ./ricsim-out
    std::filesystem::path resolve_out_dir(const RunOptions &opts);

    /// Runs the scenario and writes, into the output directory:
    /// timeseries.csv, welfare_trace_<method>.csv per method, summary.json,
    /// conflicts.jsonl, events.jsonl and store/<table>.csv. Files are staged
    /// and renamed into place only after the run succeeds.
    ExitCode cmd_run(const RunOptions &opts, std::ostream &out, std::ostream &err);
}
