#pragma once

#include "ricsim/types.hpp"

#include <filesystem>
#include <iosfwd>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

namespace ricsim
{
    /// Parameter (or KPI) value observed at a tick. `kpi_value` and
    /// `timestamp` are absent when the state comes from the fallback path and
    /// no observation exists.
    struct StateSnapshot
    {
        double param_value = 0.0;
        std::optional<double> kpi_value;
        std::optional<Tick> timestamp;
    };

    struct BracketingStates
    {
        StateSnapshot good;
        StateSnapshot bad;
        /// True when the KPI never satisfied its threshold before the
        /// degradation; `good` then holds the second-last change or the
        /// registered default.
        bool fallback = false;
    };

    struct KpiObservation
    {
        KpiId kpi;
        double value = 0.0;
        Tick timestamp = 0;
    };

    /// Centralized RIC database: recently changed parameters (RCP), parameter
    /// groups (PGD), group change rows (RCPG), parameter/KPI ranges (PKR), KPI
    /// thresholds (DCKD) and degradation occurrences (KDO), plus the KPI
    /// observation history needed to bracket a degradation.
    ///
    /// Every mutation is appended to an in-memory event log; replaying that log
    /// reconstructs an identical store. Reads take a shared lock and writes an
    /// exclusive one, so any number of readers may run alongside one writer.
    class SdlStore
    {
    public:
        static constexpr Tick default_recency_window = 50;

        SdlStore() = default;
        SdlStore(const SdlStore &other);
        SdlStore &operator=(const SdlStore &other);

        // Registry (PKR, PGD, DCKD).
        void register_parameter(const ParameterId &id, Range range, double default_value);
        void register_kpi(const KpiId &id, Range range);
        void register_group(const ParameterGroup &group);
        void register_threshold(const QoSThreshold &threshold);
        void set_recency_window(Tick window);

        Tick recency_window() const;
        bool has_parameter(const ParameterId &id) const;
        bool has_kpi(const KpiId &id) const;
        Range parameter_range(const ParameterId &id) const;
        double parameter_default(const ParameterId &id) const;
        Range kpi_range(const KpiId &id) const;
        std::optional<QoSThreshold> threshold(const KpiId &id) const;

        // RCP / RCPG.
        void record_change(const ParameterChangeRecord &rec);
        ParameterChangeRecord latest_change() const;
        /// Latest change with timestamp <= now, same tie-break as latest_change().
        std::optional<ParameterChangeRecord> latest_change_at(Tick now) const;
        std::vector<ParameterChangeRecord> changes_in_window(const ParameterId &param, Tick window, Tick now) const;
        std::vector<ParameterChangeRecord> history(const ParameterId &param) const;
        std::vector<ParameterGroup> group_of(const ParameterId &param) const;
        double value_at(const ParameterId &param, Tick tick) const;
        double current_value(const ParameterId &param) const;

        // KPI observations and KDO.
        void record_kpi_observation(const KpiId &kpi, double value, Tick tick);
        std::optional<KpiObservation> last_observation_before(const KpiId &kpi, Tick tick) const;
        DegradationEvent record_degradation(DegradationEvent ev);
        BracketingStates bracketing_states(const ParameterId &param, const KpiId &kpi, Tick degradation_tick) const;

        // Table snapshots.
        std::vector<ParameterChangeRecord> rcp() const;
        std::vector<GroupChangeRecord> rcpg() const;
        std::vector<ParameterGroup> pgd() const;
        std::vector<DegradationEvent> kdo() const;
        std::vector<QoSThreshold> dckd() const;
        std::vector<KpiObservation> kpi_history() const;

        /// One JSON object per line, `type` first, then the record's fields in
        /// declaration order.
        void write_event_log(std::ostream &out) const;
        static SdlStore replay(std::istream &in);

        /// Writes rcp.csv, pgd.csv, rcpg.csv, pkr.csv, dckd.csv and kdo.csv.
        void export_csv(const std::filesystem::path &dir) const;

    private:
        struct ParamEntry
        {
            Range range;
            double default_value = 0.0;
        };

        const ParamEntry &param_entry(const ParameterId &id) const;
        double value_at_unlocked(const ParameterId &param, Tick tick) const;
        std::optional<ParameterChangeRecord> latest_at_unlocked(Tick now) const;

        mutable std::shared_mutex mutex_;
        mutable std::mutex gate_;

        Tick window_ = default_recency_window;
        std::map<ParameterId, ParamEntry> params_;
        std::map<KpiId, Range> kpis_;
        std::vector<ParameterGroup> groups_;
        std::map<KpiId, QoSThreshold> thresholds_;

        std::vector<ParameterChangeRecord> rcp_;
        std::map<ParameterId, std::vector<std::size_t>> rcp_by_param_;
        std::vector<GroupChangeRecord> rcpg_;
        std::vector<DegradationEvent> kdo_;
        std::vector<KpiObservation> observations_;
        std::map<KpiId, std::vector<std::size_t>> observations_by_kpi_;

        std::vector<std::string> event_log_;
    };
}
