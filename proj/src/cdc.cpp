#include "ricsim/cdc.hpp"

#include <algorithm>

namespace ricsim
{
    std::string_view to_string(ConflictKind k) noexcept
    {
        switch (k)
        {
        case ConflictKind::Direct: return "direct";
        case ConflictKind::Indirect: return "indirect";
        case ConflictKind::Implicit: return "implicit";
        }
        return "unknown";
    }

    ConflictKind conflict_kind_from_string(std::string_view s)
    {
        if (s == "direct")
            return ConflictKind::Direct;
        if (s == "indirect")
            return ConflictKind::Indirect;
        if (s == "implicit")
            return ConflictKind::Implicit;
        throw Error(Errc::ParseError, "unknown conflict kind '" + std::string(s) + "'");
    }

    namespace
    {
        ojson snapshot_json(const StateSnapshot &s)
        {
            ojson j;
            j["param_value"] = s.param_value;
            j["kpi_value"] = s.kpi_value ? ojson(*s.kpi_value) : ojson(nullptr);
            j["timestamp"] = s.timestamp ? ojson(*s.timestamp) : ojson(nullptr);
            return j;
        }
    }

    ojson to_json(const ConflictReport &r)
    {
        ojson j;
        j["kind"] = std::string(to_string(r.kind));
        j["parameter"] = r.parameter.str();
        ojson z = ojson::array();
        for (const auto &x : r.involved_xapps)
            z.push_back(x.str());
        j["involved_xapps"] = std::move(z);
        j["good_state"] = snapshot_json(r.good_state);
        j["bad_state"] = snapshot_json(r.bad_state);
        j["good_state_fallback"] = r.good_state_fallback;
        ojson trig;
        trig["kpi"] = r.trigger.kpi.str();
        trig["xapp"] = r.trigger.xapp.str();
        trig["timestamp"] = r.trigger.timestamp;
        trig["degradation"] = to_json(r.trigger.degradation);
        j["trigger"] = std::move(trig);
        j["cause"] = to_json(r.cause);
        j["group"] = r.group ? to_json(*r.group) : ojson(nullptr);
        ojson demands = ojson::object();
        for (const auto &[x, v] : r.demanded_values)
            demands[x.str()] = v;
        j["demanded_values"] = std::move(demands);
        return j;
    }

    ConflictDetector::ConflictDetector(const SdlStore &store, ParameterOwnership ownership)
        : store_(store), ownership_(std::move(ownership))
    {
    }

    ConflictReport ConflictDetector::classify_conflict(const Trigger &trigger) const
    {
        const XAppId cmc = cmc_author();
        ParameterChangeRecord cause;
        if (trigger.degradation.suspect_change)
            cause = *trigger.degradation.suspect_change;
        else
            cause = store_.latest_change(); // EmptyHistory when RCP is empty

        ConflictReport report;
        report.parameter = cause.param;
        report.cause = cause;
        report.trigger = trigger;

        const XAppId &victim = trigger.xapp;
        const auto recent = store_.changes_in_window(cause.param, store_.recency_window(), trigger.timestamp);

        std::set<XAppId> z;
        z.insert(victim);
        for (const auto &r : recent)
            if (r.xapp != cmc)
                z.insert(r.xapp);
        z.erase(cmc);

        // (1) group affiliation shared with the victim's own parameters
        std::optional<ParameterGroup> shared_group;
        if (victim != cause.xapp)
        {
            auto owned = ownership_.find(victim);
            if (owned != ownership_.end())
            {
                for (const auto &g : store_.group_of(cause.param))
                {
                    const bool shares = std::any_of(g.members.begin(), g.members.end(), [&](const ParameterId &m) {
                        return owned->second.count(m) != 0;
                    });
                    if (shares)
                    {
                        shared_group = g;
                        break;
                    }
                }
            }
        }

        if (shared_group)
        {
            report.kind = ConflictKind::Indirect;
            report.group = shared_group;
        }
        else
        {
            // (2) another request on the same parameter in the recency window
            const bool contested = std::any_of(recent.begin(), recent.end(), [&](const ParameterChangeRecord &r) {
                if (r.xapp == cmc || r == cause)
                    return false;
                return r.xapp != cause.xapp || r.new_value != cause.new_value;
            });
            report.kind = contested ? ConflictKind::Direct : ConflictKind::Implicit;
        }

        if (z.size() < 2)
            throw Error(Errc::NoCounterparty, "degradation of " + trigger.kpi.str() + " involves only " + victim.str());
        report.involved_xapps.assign(z.begin(), z.end());

        auto states = store_.bracketing_states(cause.param, trigger.kpi, trigger.timestamp);
        report.good_state = states.good;
        report.bad_state = states.bad;
        report.good_state_fallback = states.fallback;

        // history() is chronological, so the last assignment wins
        for (const auto &r : store_.history(cause.param))
            if (r.timestamp <= trigger.timestamp && z.count(r.xapp))
                report.demanded_values[r.xapp] = r.new_value;

        return report;
    }
}
