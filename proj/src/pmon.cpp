#include "ricsim/pmon.hpp"

#include "ricsim/csv.hpp"

#include <ostream>

namespace ricsim
{
    std::string_view to_string(KpiStatus s) noexcept
    {
        switch (s)
        {
        case KpiStatus::Ok: return "ok";
        case KpiStatus::Breach: return "breach";
        case KpiStatus::Unmonitored: return "unmonitored";
        }
        return "unknown";
    }

    KpiStatus check_kpi(const KpiSample &sample, const QoSThreshold &threshold)
    {
        if (sample.kpi != threshold.kpi)
            throw Error(Errc::UnknownKpi, "threshold for " + threshold.kpi.str() + " applied to " + sample.kpi.str());
        return threshold.satisfied_by(sample.value) ? KpiStatus::Ok : KpiStatus::Breach;
    }

    PerformanceMonitor::PerformanceMonitor(SdlStore &store, WarningSink warn)
        : store_(store), warn_(std::move(warn))
    {
    }

    KpiStatus PerformanceMonitor::check_kpi(const KpiSample &sample) const
    {
        auto th = store_.threshold(sample.kpi);
        if (!th)
            throw Error(Errc::UnknownKpi, "no threshold registered for " + sample.kpi.str());
        return ricsim::check_kpi(sample, *th);
    }

    std::vector<Trigger> PerformanceMonitor::scan_and_trigger(const std::vector<KpiSample> &samples, Tick now,
                                                              std::vector<KpiTraceRow> *trace)
    {
        std::vector<Trigger> triggers;
        for (auto sample : samples)
        {
            if (sample.timestamp != now)
                throw Error(Errc::InvalidArgument, "sample of " + sample.kpi.str() + " at t=" +
                                                       std::to_string(sample.timestamp) + " in scan at t=" + std::to_string(now));
            const Range range = store_.kpi_range(sample.kpi);
            if (!range.contains(sample.value))
            {
                if (warn_)
                    warn_("t=" + std::to_string(now) + ": " + sample.kpi.str() + " = " + format_double(sample.value) +
                          " outside its range, clamped");
                sample.value = range.clamp(sample.value);
            }

            const auto th = store_.threshold(sample.kpi);
            const auto previous = store_.last_observation_before(sample.kpi, now);
            store_.record_kpi_observation(sample.kpi, sample.value, now);

            KpiStatus status = KpiStatus::Unmonitored;
            if (th)
            {
                status = ricsim::check_kpi(sample, *th);
                const bool was_ok = !previous || th->satisfied_by(previous->value);
                if (status == KpiStatus::Breach && was_ok)
                {
                    auto ev = store_.record_degradation(DegradationEvent{sample.kpi, sample.value, now, std::nullopt});
                    triggers.push_back(Trigger{sample.kpi, sample.xapp, now, std::move(ev)});
                }
            }
            if (trace)
                trace->push_back(KpiTraceRow{now, sample.kpi, sample.xapp, sample.value, status});
        }
        return triggers;
    }

    void write_kpi_trace_csv(std::ostream &out, const std::vector<KpiTraceRow> &rows)
    {
        csv::write_row(out, {"tick", "kpi", "xapp", "value", "status"});
        for (const auto &r : rows)
            csv::write_row(out, {std::to_string(r.tick), r.kpi.str(), r.xapp.str(), format_double(r.value),
                                 std::string(to_string(r.status))});
    }
}
