#include "ricsim/json_io.hpp"

namespace ricsim
{
    ojson to_json(const ParameterChangeRecord &rec)
    {
        ojson j;
        j["param"] = rec.param.str();
        j["xapp"] = rec.xapp.str();
        j["old_value"] = rec.old_value;
        j["new_value"] = rec.new_value;
        j["timestamp"] = rec.timestamp;
        return j;
    }

    ParameterChangeRecord change_from_json(const ojson &j)
    {
        return ParameterChangeRecord{
            ParameterId(j.at("param").get<std::string>()),
            XAppId(j.at("xapp").get<std::string>()),
            j.at("old_value").get<double>(),
            j.at("new_value").get<double>(),
            j.at("timestamp").get<Tick>(),
        };
    }

    ojson to_json(const ParameterGroup &g)
    {
        ojson j;
        j["group_id"] = g.group_id;
        ojson members = ojson::array();
        for (const auto &m : g.members)
            members.push_back(m.str());
        j["members"] = std::move(members);
        j["affected_area"] = g.affected_area;
        return j;
    }

    ParameterGroup group_from_json(const ojson &j)
    {
        ParameterGroup g;
        g.group_id = j.at("group_id").get<std::string>();
        for (const auto &m : j.at("members"))
            g.members.emplace_back(m.get<std::string>());
        g.affected_area = j.value("affected_area", std::string{});
        return g;
    }

    ojson to_json(const QoSThreshold &t)
    {
        ojson j;
        j["kpi"] = t.kpi.str();
        j["threshold"] = t.threshold;
        j["direction"] = std::string(to_string(t.direction));
        return j;
    }

    QoSThreshold threshold_from_json(const ojson &j)
    {
        return QoSThreshold{
            KpiId(j.at("kpi").get<std::string>()),
            j.at("threshold").get<double>(),
            direction_from_string(j.value("direction", std::string("at_least"))),
        };
    }

    ojson to_json(const DegradationEvent &ev)
    {
        ojson j;
        j["kpi"] = ev.kpi.str();
        j["observed_value"] = ev.observed_value;
        j["timestamp"] = ev.timestamp;
        j["suspect_change"] = ev.suspect_change ? to_json(*ev.suspect_change) : ojson(nullptr);
        return j;
    }

    DegradationEvent degradation_from_json(const ojson &j)
    {
        DegradationEvent ev;
        ev.kpi = KpiId(j.at("kpi").get<std::string>());
        ev.observed_value = j.at("observed_value").get<double>();
        ev.timestamp = j.at("timestamp").get<Tick>();
        if (j.contains("suspect_change") && !j.at("suspect_change").is_null())
            ev.suspect_change = change_from_json(j.at("suspect_change"));
        return ev;
    }

    ojson to_json(const Range &r)
    {
        return ojson::array({r.min, r.max});
    }

    Range range_from_json(const ojson &j)
    {
        if (!j.is_array() || j.size() != 2)
            throw Error(Errc::ParseError, "range must be a two-element array [min, max]");
        return Range{j.at(0).get<double>(), j.at(1).get<double>()};
    }
}
