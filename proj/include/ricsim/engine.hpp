#pragma once

#include "ricsim/cdc.hpp"
#include "ricsim/cmc.hpp"
#include "ricsim/pmon.hpp"
#include "ricsim/scenario.hpp"
#include "ricsim/sdl_store.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ricsim
{
    struct EngineOptions
    {
        std::optional<WelfareMethod> method; // overrides the scenario's solver method
        bool all_methods = false;            // also run the other two methods as shadows
        std::optional<int> samples;
    };

    struct ConflictOutcome
    {
        ConflictReport report;
        /// results.front() is the committed method; any others are shadow
        /// runs on the identical report.
        std::vector<MitigationResult> results;
        std::optional<Tick> commit_tick;
        bool breach_persisted = false;

        const MitigationResult &committed() const { return results.front(); }
    };

    struct SkippedTrigger
    {
        Trigger trigger;
        std::string reason;
    };

    struct SeriesRow
    {
        Tick tick = 0;
        std::string series; // "kpi" or "param"
        std::string id;
        std::string owner; // KPI owner, or last author of the parameter
        double value = 0.0;
        std::optional<double> utility;
        std::string status;
    };

    struct RunReport
    {
        std::string scenario;
        std::vector<WelfareMethod> methods;
        std::vector<Trigger> triggers;
        std::vector<ConflictOutcome> conflicts;
        std::vector<SkippedTrigger> skipped;
        std::vector<SeriesRow> series;
        std::vector<std::string> warnings;
        bool aborted = false;
        std::string abort_reason;
        SdlStore store;
    };

    /// Deterministic tick loop. At each tick: apply pending CMC commits, apply
    /// the timeline, sample every KPI, run the monitor, and for each trigger
    /// classify and mitigate. Suggested values are committed at the next tick
    /// under the reserved author "CMC".
    ///
    /// Throws Error(ValidationError) for an invalid scenario. Protocol errors
    /// during mitigation stop the run; the partial report has `aborted` set.
    RunReport run_scenario(const ScenarioSpec &spec, const EngineOptions &options = {});

    /// tick,series,id,owner,value,utility,status
    void write_timeseries_csv(std::ostream &out, const RunReport &report);
    ojson summary_json(const RunReport &report);
    /// One ConflictReport per line.
    void write_conflict_log(std::ostream &out, const RunReport &report);
}
