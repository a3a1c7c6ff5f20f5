#pragma once

#include "ricsim/sdl_store.hpp"

#include <functional>
#include <iosfwd>
#include <string_view>
#include <vector>

namespace ricsim
{
    enum class KpiStatus
    {
        Ok,
        Breach,
        Unmonitored, // no threshold registered
    };

    std::string_view to_string(KpiStatus s) noexcept;

    struct KpiSample
    {
        KpiId kpi;
        XAppId xapp;
        double value = 0.0;
        Tick timestamp = 0;
    };

    struct Trigger
    {
        KpiId kpi;
        XAppId xapp;
        Tick timestamp = 0;
        DegradationEvent degradation;
    };

    struct KpiTraceRow
    {
        Tick tick = 0;
        KpiId kpi;
        XAppId xapp;
        double value = 0.0;
        KpiStatus status = KpiStatus::Ok;
    };

    /// Breach iff the value is on the wrong side of the threshold; a value
    /// exactly at the threshold is Ok.
    KpiStatus check_kpi(const KpiSample &sample, const QoSThreshold &threshold);

    using WarningSink = std::function<void(std::string_view)>;

    /// Performance monitor. Holds no state of its own: the previous status of
    /// a KPI is read back from the store's observation history, so breach
    /// onsets are detected edge-triggered across calls.
    class PerformanceMonitor
    {
    public:
        explicit PerformanceMonitor(SdlStore &store, WarningSink warn = {});

        /// Threshold looked up in the store; UnknownKpi if none is registered.
        KpiStatus check_kpi(const KpiSample &sample) const;

        /// Records each sample (clamped to its KPI range) and returns one
        /// trigger per Ok->Breach transition. `trace`, if given, receives one
        /// row per sample.
        std::vector<Trigger> scan_and_trigger(const std::vector<KpiSample> &samples, Tick now,
                                              std::vector<KpiTraceRow> *trace = nullptr);

    private:
        SdlStore &store_;
        WarningSink warn_;
    };

    /// tick,kpi,xapp,value,status
    void write_kpi_trace_csv(std::ostream &out, const std::vector<KpiTraceRow> &rows);
}
