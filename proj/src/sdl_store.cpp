#include "ricsim/sdl_store.hpp"

#include "ricsim/csv.hpp"
#include "ricsim/json_io.hpp"

#include <algorithm>
#include <istream>
#include <limits>
#include <mutex>
#include <ostream>

namespace ricsim
{
    namespace
    {
        // std::shared_mutex may prefer readers, so a steady stream of them can
        // starve a writer. A waiting writer holds `gate`, which holds off new
        // readers until it has been served.
        class ReadLock
        {
        public:
            ReadLock(std::shared_mutex &m, std::mutex &gate)
            {
                {
                    std::lock_guard<std::mutex> g(gate);
                }
                lock_ = std::shared_lock<std::shared_mutex>(m);
            }

        private:
            std::shared_lock<std::shared_mutex> lock_;
        };

        class WriteLock
        {
        public:
            WriteLock(std::shared_mutex &m, std::mutex &gate) : gate_(gate), lock_(m) {}

        private:
            std::lock_guard<std::mutex> gate_;
            std::unique_lock<std::shared_mutex> lock_;
        };

        std::string log_line(const char *type, ojson body)
        {
            ojson line;
            line["type"] = type;
            for (auto &[k, v] : body.items())
                line[k] = v;
            return line.dump();
        }
    }

    SdlStore::SdlStore(const SdlStore &other)
    {
        ReadLock lock(other.mutex_, other.gate_);
        window_ = other.window_;
        params_ = other.params_;
        kpis_ = other.kpis_;
        groups_ = other.groups_;
        thresholds_ = other.thresholds_;
        rcp_ = other.rcp_;
        rcp_by_param_ = other.rcp_by_param_;
        rcpg_ = other.rcpg_;
        kdo_ = other.kdo_;
        observations_ = other.observations_;
        observations_by_kpi_ = other.observations_by_kpi_;
        event_log_ = other.event_log_;
    }

    SdlStore &SdlStore::operator=(const SdlStore &other)
    {
        if (this != &other)
        {
            SdlStore copy(other);
            WriteLock lock(mutex_, gate_);
            window_ = copy.window_;
            params_ = std::move(copy.params_);
            kpis_ = std::move(copy.kpis_);
            groups_ = std::move(copy.groups_);
            thresholds_ = std::move(copy.thresholds_);
            rcp_ = std::move(copy.rcp_);
            rcp_by_param_ = std::move(copy.rcp_by_param_);
            rcpg_ = std::move(copy.rcpg_);
            kdo_ = std::move(copy.kdo_);
            observations_ = std::move(copy.observations_);
            observations_by_kpi_ = std::move(copy.observations_by_kpi_);
            event_log_ = std::move(copy.event_log_);
        }
        return *this;
    }

    // --- registry -------------------------------------------------------------

    void SdlStore::register_parameter(const ParameterId &id, Range range, double default_value)
    {
        if (!range.valid())
            throw Error(Errc::DegenerateRange, "parameter " + id.str() + " range must satisfy min < max");
        if (!range.contains(default_value))
            throw Error(Errc::OutOfRange, "default of " + id.str() + " lies outside its range");
        WriteLock lock(mutex_, gate_);
        params_[id] = ParamEntry{range, default_value};
        ojson j;
        j["id"] = id.str();
        j["range"] = to_json(range);
        j["default"] = default_value;
        event_log_.push_back(log_line("register_parameter", std::move(j)));
    }

    void SdlStore::register_kpi(const KpiId &id, Range range)
    {
        if (!range.valid())
            throw Error(Errc::DegenerateRange, "kpi " + id.str() + " range must satisfy min < max");
        WriteLock lock(mutex_, gate_);
        kpis_[id] = range;
        ojson j;
        j["id"] = id.str();
        j["range"] = to_json(range);
        event_log_.push_back(log_line("register_kpi", std::move(j)));
    }

    void SdlStore::register_group(const ParameterGroup &group)
    {
        if (group.members.empty())
            throw Error(Errc::InvalidArgument, "group " + group.group_id + " has no members");
        WriteLock lock(mutex_, gate_);
        for (const auto &m : group.members)
            if (!params_.count(m))
                throw Error(Errc::UnknownParameter, "group " + group.group_id + " references unknown parameter " + m.str());
        groups_.push_back(group);
        event_log_.push_back(log_line("register_group", to_json(group)));
    }

    void SdlStore::register_threshold(const QoSThreshold &threshold)
    {
        WriteLock lock(mutex_, gate_);
        auto it = kpis_.find(threshold.kpi);
        if (it == kpis_.end())
            throw Error(Errc::UnknownKpi, threshold.kpi.str());
        if (!it->second.contains(threshold.threshold))
            throw Error(Errc::OutOfRange, "threshold for " + threshold.kpi.str() + " lies outside the KPI range");
        thresholds_[threshold.kpi] = threshold;
        event_log_.push_back(log_line("register_threshold", to_json(threshold)));
    }

    void SdlStore::set_recency_window(Tick window)
    {
        if (window <= 0)
            throw Error(Errc::InvalidArgument, "recency window must be positive");
        WriteLock lock(mutex_, gate_);
        window_ = window;
        ojson j;
        j["window"] = window;
        event_log_.push_back(log_line("set_recency_window", std::move(j)));
    }

    Tick SdlStore::recency_window() const
    {
        ReadLock lock(mutex_, gate_);
        return window_;
    }

    bool SdlStore::has_parameter(const ParameterId &id) const
    {
        ReadLock lock(mutex_, gate_);
        return params_.count(id) != 0;
    }

    bool SdlStore::has_kpi(const KpiId &id) const
    {
        ReadLock lock(mutex_, gate_);
        return kpis_.count(id) != 0;
    }

    const SdlStore::ParamEntry &SdlStore::param_entry(const ParameterId &id) const
    {
        auto it = params_.find(id);
        if (it == params_.end())
            throw Error(Errc::UnknownParameter, id.str());
        return it->second;
    }

    Range SdlStore::parameter_range(const ParameterId &id) const
    {
        ReadLock lock(mutex_, gate_);
        return param_entry(id).range;
    }

    double SdlStore::parameter_default(const ParameterId &id) const
    {
        ReadLock lock(mutex_, gate_);
        return param_entry(id).default_value;
    }

    Range SdlStore::kpi_range(const KpiId &id) const
    {
        ReadLock lock(mutex_, gate_);
        auto it = kpis_.find(id);
        if (it == kpis_.end())
            throw Error(Errc::UnknownKpi, id.str());
        return it->second;
    }

    std::optional<QoSThreshold> SdlStore::threshold(const KpiId &id) const
    {
        ReadLock lock(mutex_, gate_);
        auto it = thresholds_.find(id);
        if (it == thresholds_.end())
            return std::nullopt;
        return it->second;
    }

    // --- RCP / RCPG -----------------------------------------------------------

    void SdlStore::record_change(const ParameterChangeRecord &rec)
    {
        WriteLock lock(mutex_, gate_);
        const auto &entry = param_entry(rec.param);
        if (!entry.range.contains(rec.new_value))
            throw Error(Errc::OutOfRange, rec.param.str() + " = " + format_double(rec.new_value) + " outside [" +
                                              format_double(entry.range.min) + ", " + format_double(entry.range.max) + "]");
        auto &idx = rcp_by_param_[rec.param];
        if (!idx.empty() && rcp_[idx.back()].timestamp >= rec.timestamp)
            throw Error(Errc::StaleTimestamp, rec.param.str() + " at t=" + std::to_string(rec.timestamp) +
                                                  " is not newer than t=" + std::to_string(rcp_[idx.back()].timestamp));

        idx.push_back(rcp_.size());
        rcp_.push_back(rec);
        for (const auto &g : groups_)
        {
            if (!g.contains(rec.param))
                continue;
            GroupChangeRecord row{rec, g.group_id, {}};
            for (const auto &m : g.members)
                if (m != rec.param)
                    row.co_members.push_back(m);
            rcpg_.push_back(std::move(row));
        }
        event_log_.push_back(log_line("change", to_json(rec)));
    }

    std::optional<ParameterChangeRecord> SdlStore::latest_at_unlocked(Tick now) const
    {
        const ParameterChangeRecord *best = nullptr;
        for (const auto &r : rcp_)
        {
            if (r.timestamp > now)
                continue;
            // >= so that a later insertion wins a timestamp tie
            if (!best || r.timestamp >= best->timestamp)
                best = &r;
        }
        if (!best)
            return std::nullopt;
        return *best;
    }

    ParameterChangeRecord SdlStore::latest_change() const
    {
        ReadLock lock(mutex_, gate_);
        auto r = latest_at_unlocked(std::numeric_limits<Tick>::max());
        if (!r)
            throw Error(Errc::EmptyHistory, "no parameter change recorded");
        return *r;
    }

    std::optional<ParameterChangeRecord> SdlStore::latest_change_at(Tick now) const
    {
        ReadLock lock(mutex_, gate_);
        return latest_at_unlocked(now);
    }

    std::vector<ParameterChangeRecord> SdlStore::changes_in_window(const ParameterId &param, Tick window, Tick now) const
    {
        if (window <= 0)
            throw Error(Errc::InvalidArgument, "window must be positive");
        ReadLock lock(mutex_, gate_);
        std::vector<ParameterChangeRecord> out;
        auto it = rcp_by_param_.find(param);
        if (it == rcp_by_param_.end())
            return out;
        for (auto i = it->second.rbegin(); i != it->second.rend(); ++i)
        {
            const auto &r = rcp_[*i];
            if (r.timestamp < now - window)
                break; // per-parameter history is chronological
            if (r.timestamp <= now)
                out.push_back(r);
        }
        return out;
    }

    std::vector<ParameterChangeRecord> SdlStore::history(const ParameterId &param) const
    {
        ReadLock lock(mutex_, gate_);
        std::vector<ParameterChangeRecord> out;
        auto it = rcp_by_param_.find(param);
        if (it != rcp_by_param_.end())
            for (auto i : it->second)
                out.push_back(rcp_[i]);
        return out;
    }

    std::vector<ParameterGroup> SdlStore::group_of(const ParameterId &param) const
    {
        ReadLock lock(mutex_, gate_);
        std::vector<ParameterGroup> out;
        for (const auto &g : groups_)
            if (g.contains(param))
                out.push_back(g);
        return out;
    }

    double SdlStore::value_at_unlocked(const ParameterId &param, Tick tick) const
    {
        const auto &entry = param_entry(param);
        auto it = rcp_by_param_.find(param);
        if (it == rcp_by_param_.end())
            return entry.default_value;
        double v = entry.default_value;
        for (auto i : it->second)
        {
            if (rcp_[i].timestamp > tick)
                break;
            v = rcp_[i].new_value;
        }
        return v;
    }

    double SdlStore::value_at(const ParameterId &param, Tick tick) const
    {
        ReadLock lock(mutex_, gate_);
        return value_at_unlocked(param, tick);
    }

    double SdlStore::current_value(const ParameterId &param) const
    {
        ReadLock lock(mutex_, gate_);
        return value_at_unlocked(param, std::numeric_limits<Tick>::max());
    }

    // --- KPI observations / KDO -----------------------------------------------

    void SdlStore::record_kpi_observation(const KpiId &kpi, double value, Tick tick)
    {
        WriteLock lock(mutex_, gate_);
        if (!kpis_.count(kpi))
            throw Error(Errc::UnknownKpi, kpi.str());
        auto &idx = observations_by_kpi_[kpi];
        if (!idx.empty() && observations_[idx.back()].timestamp >= tick)
            throw Error(Errc::StaleTimestamp, "observation of " + kpi.str() + " at t=" + std::to_string(tick));
        idx.push_back(observations_.size());
        observations_.push_back(KpiObservation{kpi, value, tick});
        ojson j;
        j["kpi"] = kpi.str();
        j["value"] = value;
        j["timestamp"] = tick;
        event_log_.push_back(log_line("kpi_observation", std::move(j)));
    }

    std::optional<KpiObservation> SdlStore::last_observation_before(const KpiId &kpi, Tick tick) const
    {
        ReadLock lock(mutex_, gate_);
        auto it = observations_by_kpi_.find(kpi);
        if (it == observations_by_kpi_.end())
            return std::nullopt;
        for (auto i = it->second.rbegin(); i != it->second.rend(); ++i)
            if (observations_[*i].timestamp < tick)
                return observations_[*i];
        return std::nullopt;
    }

    DegradationEvent SdlStore::record_degradation(DegradationEvent ev)
    {
        WriteLock lock(mutex_, gate_);
        auto it = thresholds_.find(ev.kpi);
        if (it == thresholds_.end())
            throw Error(Errc::UnknownKpi, "no threshold registered for " + ev.kpi.str());
        if (it->second.satisfied_by(ev.observed_value))
            throw Error(Errc::NotADegradation, ev.kpi.str() + " = " + format_double(ev.observed_value) + " satisfies its threshold");
        ev.suspect_change = latest_at_unlocked(ev.timestamp);
        kdo_.push_back(ev);
        event_log_.push_back(log_line("degradation", to_json(ev)));
        return ev;
    }

    BracketingStates SdlStore::bracketing_states(const ParameterId &param, const KpiId &kpi, Tick degradation_tick) const
    {
        ReadLock lock(mutex_, gate_);
        param_entry(param);
        auto th = thresholds_.find(kpi);
        if (th == thresholds_.end())
            throw Error(Errc::UnknownKpi, "no threshold registered for " + kpi.str());

        std::vector<const ParameterChangeRecord *> prior;
        if (auto it = rcp_by_param_.find(param); it != rcp_by_param_.end())
            for (auto i : it->second)
                if (rcp_[i].timestamp <= degradation_tick)
                    prior.push_back(&rcp_[i]);
        if (prior.empty())
            throw Error(Errc::EmptyHistory, "no change of " + param.str() + " at or before t=" + std::to_string(degradation_tick));

        BracketingStates out;
        out.bad.param_value = value_at_unlocked(param, degradation_tick);
        out.bad.timestamp = degradation_tick;

        const KpiObservation *good = nullptr;
        if (auto it = observations_by_kpi_.find(kpi); it != observations_by_kpi_.end())
        {
            for (auto i : it->second)
            {
                const auto &o = observations_[i];
                if (o.timestamp >= degradation_tick && !out.bad.kpi_value)
                {
                    out.bad.kpi_value = o.value;
                    out.bad.timestamp = o.timestamp;
                }
                if (o.timestamp < degradation_tick && th->second.satisfied_by(o.value))
                    good = &o;
            }
        }

        if (good)
        {
            out.good.param_value = value_at_unlocked(param, good->timestamp);
            out.good.kpi_value = good->value;
            out.good.timestamp = good->timestamp;
        }
        else
        {
            out.fallback = true;
            if (prior.size() >= 2)
            {
                out.good.param_value = prior[prior.size() - 2]->new_value;
                out.good.timestamp = prior[prior.size() - 2]->timestamp;
            }
            else
            {
                out.good.param_value = param_entry(param).default_value;
            }
        }
        return out;
    }

    // --- snapshots --------------------------------------------------------------

    std::vector<ParameterChangeRecord> SdlStore::rcp() const
    {
        ReadLock lock(mutex_, gate_);
        return rcp_;
    }

    std::vector<GroupChangeRecord> SdlStore::rcpg() const
    {
        ReadLock lock(mutex_, gate_);
        return rcpg_;
    }

    std::vector<ParameterGroup> SdlStore::pgd() const
    {
        ReadLock lock(mutex_, gate_);
        return groups_;
    }

    std::vector<DegradationEvent> SdlStore::kdo() const
    {
        ReadLock lock(mutex_, gate_);
        return kdo_;
    }

    std::vector<QoSThreshold> SdlStore::dckd() const
    {
        ReadLock lock(mutex_, gate_);
        std::vector<QoSThreshold> out;
        for (const auto &[_, t] : thresholds_)
            out.push_back(t);
        return out;
    }

    std::vector<KpiObservation> SdlStore::kpi_history() const
    {
        ReadLock lock(mutex_, gate_);
        return observations_;
    }

    // --- persistence -------------------------------------------------------------

    void SdlStore::write_event_log(std::ostream &out) const
    {
        ReadLock lock(mutex_, gate_);
        for (const auto &line : event_log_)
            out << line << '\n';
    }

    SdlStore SdlStore::replay(std::istream &in)
    {
        SdlStore store;
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line))
        {
            ++line_no;
            if (line.empty())
                continue;
            try
            {
                auto j = ojson::parse(line);
                const auto type = j.at("type").get<std::string>();
                if (type == "register_parameter")
                    store.register_parameter(ParameterId(j.at("id").get<std::string>()), range_from_json(j.at("range")),
                                             j.at("default").get<double>());
                else if (type == "register_kpi")
                    store.register_kpi(KpiId(j.at("id").get<std::string>()), range_from_json(j.at("range")));
                else if (type == "register_group")
                    store.register_group(group_from_json(j));
                else if (type == "register_threshold")
                    store.register_threshold(threshold_from_json(j));
                else if (type == "set_recency_window")
                    store.set_recency_window(j.at("window").get<Tick>());
                else if (type == "change")
                    store.record_change(change_from_json(j));
                else if (type == "kpi_observation")
                    store.record_kpi_observation(KpiId(j.at("kpi").get<std::string>()), j.at("value").get<double>(),
                                                 j.at("timestamp").get<Tick>());
                else if (type == "degradation")
                    store.record_degradation(degradation_from_json(j));
                else
                    throw Error(Errc::ParseError, "unknown record type '" + type + "'");
            }
            catch (const nlohmann::json::exception &e)
            {
                throw Error(Errc::ParseError, "event log line " + std::to_string(line_no) + ": " + e.what());
            }
        }
        return store;
    }

    void SdlStore::export_csv(const std::filesystem::path &dir) const
    {
        std::filesystem::create_directories(dir);
        ReadLock lock(mutex_, gate_);

        auto join = [](const std::vector<ParameterId> &ids) {
            std::string s;
            for (std::size_t i = 0; i < ids.size(); ++i)
                s += (i ? ";" : "") + ids[i].str();
            return s;
        };
        auto change_cells = [](const ParameterChangeRecord &r) {
            return std::vector<std::string>{std::to_string(r.timestamp), r.param.str(), r.xapp.str(),
                                            format_double(r.old_value), format_double(r.new_value)};
        };

        std::vector<std::vector<std::string>> rows;
        for (const auto &r : rcp_)
            rows.push_back(change_cells(r));
        csv::write_file(dir / "rcp.csv", {"timestamp", "param", "xapp", "old_value", "new_value"}, rows);

        rows.clear();
        for (const auto &g : groups_)
            rows.push_back({g.group_id, join(g.members), g.affected_area});
        csv::write_file(dir / "pgd.csv", {"group_id", "members", "affected_area"}, rows);

        rows.clear();
        for (const auto &g : rcpg_)
        {
            auto cells = change_cells(g.change);
            cells.push_back(g.group_id);
            cells.push_back(join(g.co_members));
            rows.push_back(std::move(cells));
        }
        csv::write_file(dir / "rcpg.csv", {"timestamp", "param", "xapp", "old_value", "new_value", "group_id", "co_members"}, rows);

        rows.clear();
        for (const auto &[id, e] : params_)
            rows.push_back({"parameter", id.str(), format_double(e.range.min), format_double(e.range.max), format_double(e.default_value)});
        for (const auto &[id, r] : kpis_)
            rows.push_back({"kpi", id.str(), format_double(r.min), format_double(r.max), ""});
        csv::write_file(dir / "pkr.csv", {"kind", "id", "min", "max", "default"}, rows);

        rows.clear();
        for (const auto &[id, t] : thresholds_)
            rows.push_back({id.str(), format_double(t.threshold), std::string(to_string(t.direction))});
        csv::write_file(dir / "dckd.csv", {"kpi", "threshold", "direction"}, rows);

        rows.clear();
        for (const auto &ev : kdo_)
        {
            std::vector<std::string> cells{std::to_string(ev.timestamp), ev.kpi.str(), format_double(ev.observed_value)};
            if (ev.suspect_change)
            {
                cells.push_back(ev.suspect_change->param.str());
                cells.push_back(ev.suspect_change->xapp.str());
                cells.push_back(std::to_string(ev.suspect_change->timestamp));
            }
            else
            {
                cells.insert(cells.end(), {"", "", ""});
            }
            rows.push_back(std::move(cells));
        }
        csv::write_file(dir / "kdo.csv", {"timestamp", "kpi", "observed_value", "suspect_param", "suspect_xapp", "suspect_timestamp"}, rows);
    }
}
