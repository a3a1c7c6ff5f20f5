#pragma once

#include "ricsim/cdc.hpp"
#include "ricsim/channel.hpp"
#include "ricsim/json_io.hpp"
#include "ricsim/sdl_store.hpp"
#include "ricsim/welfare.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

namespace ricsim
{
    struct SolverConfig
    {
        WelfareMethod method = WelfareMethod::Nswf;
        int samples = 2001;
        double scale = 1.0;
        int refinement_passes = 2;

        void validate() const;
    };

    struct WelfareTracePoint
    {
        double x = 0.0;
        double welfare = 0.0;
        int pass = 0;
        std::vector<double> utilities; // aligned with MitigationResult::xapps
    };

    struct MitigationResult
    {
        WelfareMethod method = WelfareMethod::Nswf;
        double suggested_value = 0.0;
        std::vector<XAppId> xapps;
        std::vector<double> weights;
        std::vector<double> utilities;
        double welfare = 0.0;

        /// Status quo: the degraded parameter value and what it yields.
        double baseline_value = 0.0;
        std::vector<double> baseline_utilities;
        double baseline_welfare = 0.0;

        Range optimal_range;
        std::size_t evaluations = 0; // channel queries issued
        std::size_t query_budget = 0;
        std::vector<WelfareTracePoint> trace;
    };

    ojson to_json(const MitigationResult &r);

    /// conflict,method,pass,x,welfare,u_<xapp>... ; `conflict` labels the rows.
    void write_welfare_trace_csv(std::ostream &out, const std::vector<std::pair<std::size_t, const MitigationResult *>> &results);

    /// Closed-loop conflict mitigation. The first round-trip gathers each
    /// involved xApp's KPIs at the degraded value, its range for the parameter
    /// and its weight; the controller then sweeps the hull of the ranges,
    /// asking every xApp for its KPIs at each candidate and scoring the
    /// normalised utilities with the configured welfare function.
    class MitigationController
    {
    public:
        explicit MitigationController(const SdlStore &store);

        MitigationResult mitigate(const ConflictReport &report, const SolverConfig &config, Channel &channel);

    private:
        const SdlStore &store_;
        std::uint64_t next_correlation_ = 1;
    };
}
