#pragma once

#include "ricsim/cmc.hpp"
#include "ricsim/json_io.hpp"
#include "ricsim/xapp_agent.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace ricsim
{
    struct ParameterSpec
    {
        ParameterId id;
        Range range;
        double default_value = 0.0;
    };

    struct KpiSpec
    {
        KpiId id;
        XAppId owner;
        Range range;
        UtilityFunctionSpec model;
    };

    struct AgentSpec
    {
        XAppId id;
        std::vector<ParameterId> params; // ICPs this xApp controls
        Range param_range;               // acceptable range for a conflicting parameter
    };

    struct TimelineEntry
    {
        Tick tick = 0;
        XAppId xapp;
        ParameterId param;
        double value = 0.0;
    };

    struct ScenarioSpec
    {
        std::string name;
        std::string description;
        Tick duration = 0;
        Tick recency_window = 50;
        std::vector<ParameterSpec> parameters;
        std::vector<KpiSpec> kpis;
        std::vector<AgentSpec> agents;
        std::vector<ParameterGroup> groups;
        std::vector<QoSThreshold> thresholds;
        /// state tag -> xApp -> weight
        std::map<std::string, std::map<XAppId, double>> weights;
        std::vector<TimelineEntry> timeline;
        SolverConfig solver;
    };

    struct Diagnostic
    {
        std::string field; // e.g. "timeline[2].param"
        std::string message;
    };

    std::string to_string(const Diagnostic &d);

    /// Structural parse. Throws Error(ParseError) naming the offending field,
    /// or the line and column for malformed JSON.
    ScenarioSpec parse_scenario(const ojson &doc);
    ScenarioSpec parse_scenario_text(const std::string &text);
    ScenarioSpec load_scenario(const std::filesystem::path &path);

    /// Referential and invariant checks; empty when the scenario is runnable.
    std::vector<Diagnostic> validate(const ScenarioSpec &spec);
}
