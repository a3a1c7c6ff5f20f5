#include "ricsim/scenario.hpp"

#include "ricsim/welfare.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace ricsim
{
    std::string to_string(const Diagnostic &d)
    {
        return d.field.empty() ? d.message : d.field + ": " + d.message;
    }

    namespace
    {
        [[noreturn]] void fail(const std::string &path, const std::string &msg)
        {
            throw Error(Errc::ParseError, path + ": " + msg);
        }

        const ojson &need(const ojson &obj, const char *key, const std::string &path)
        {
            if (!obj.is_object())
                fail(path, "expected an object");
            auto it = obj.find(key);
            if (it == obj.end())
                fail(path, std::string("missing field '") + key + "'");
            return *it;
        }

        template <typename T>
        T get(const ojson &j, const std::string &path)
        {
            try
            {
                return j.get<T>();
            }
            catch (const nlohmann::json::exception &)
            {
                if constexpr (std::is_same_v<T, std::string>)
                    fail(path, "expected a string");
                else if constexpr (std::is_integral_v<T>)
                    fail(path, "expected an integer");
                else
                    fail(path, "expected a number");
            }
        }

        double number(const ojson &obj, const char *key, const std::string &path)
        {
            const auto &j = need(obj, key, path);
            if (!j.is_number())
                fail(path + "." + key, "expected a number");
            return j.get<double>();
        }

        std::string text(const ojson &obj, const char *key, const std::string &path)
        {
            const auto &j = need(obj, key, path);
            if (!j.is_string())
                fail(path + "." + key, "expected a string");
            return j.get<std::string>();
        }

        Tick integer(const ojson &j, const std::string &path)
        {
            if (!j.is_number_integer())
                fail(path, "expected an integer");
            return j.get<Tick>();
        }

        template <typename IdT>
        IdT id_of(const ojson &obj, const char *key, const std::string &path)
        {
            auto s = text(obj, key, path);
            if (s.empty())
                fail(path + "." + key, "identifier must be non-empty");
            return IdT(s);
        }

        Range range(const ojson &obj, const char *key, const std::string &path)
        {
            const auto &j = need(obj, key, path);
            if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
                fail(path + "." + key, "expected [min, max]");
            return Range{j[0].get<double>(), j[1].get<double>()};
        }

        const ojson &array(const ojson &obj, const char *key, const std::string &path, bool required = true)
        {
            static const ojson empty = ojson::array();
            auto it = obj.find(key);
            if (it == obj.end())
            {
                if (required)
                    fail(path, std::string("missing field '") + key + "'");
                return empty;
            }
            if (!it->is_array())
                fail(path.empty() ? key : path + "." + key, "expected an array");
            return *it;
        }

        std::string at(const std::string &base, std::size_t i)
        {
            return base + "[" + std::to_string(i) + "]";
        }
    }

    ScenarioSpec parse_scenario(const ojson &doc)
    {
        if (!doc.is_object())
            fail("$", "scenario must be a JSON object");

        ScenarioSpec s;
        s.name = text(doc, "name", "$");
        s.description = doc.value("description", std::string{});
        if (doc.contains("recency_window"))
            s.recency_window = integer(doc.at("recency_window"), "recency_window");

        const auto &params = array(doc, "parameters", "$");
        for (std::size_t i = 0; i < params.size(); ++i)
        {
            const auto p = at("parameters", i);
            s.parameters.push_back(ParameterSpec{id_of<ParameterId>(params[i], "id", p), range(params[i], "range", p),
                                                 number(params[i], "default", p)});
        }

        const auto &kpis = array(doc, "kpis", "$");
        for (std::size_t i = 0; i < kpis.size(); ++i)
        {
            const auto p = at("kpis", i);
            KpiSpec k;
            k.id = id_of<KpiId>(kpis[i], "id", p);
            k.owner = id_of<XAppId>(kpis[i], "owner", p);
            k.range = range(kpis[i], "range", p);
            const auto &m = need(kpis[i], "model", p);
            const auto mp = p + ".model";
            k.model.amplitude = number(m, "amplitude", mp);
            k.model.center = m.contains("center") ? number(m, "center", mp) : 0.0;
            k.model.width = number(m, "width", mp);
            k.model.input = id_of<ParameterId>(m, "input", mp);
            if (m.contains("coupling"))
                k.model.coupling = id_of<KpiId>(m, "coupling", mp);
            if (m.contains("coupled_param"))
                k.model.coupled_param = id_of<ParameterId>(m, "coupled_param", mp);
            s.kpis.push_back(std::move(k));
        }

        const auto &xapps = array(doc, "xapps", "$");
        for (std::size_t i = 0; i < xapps.size(); ++i)
        {
            const auto p = at("xapps", i);
            AgentSpec a;
            a.id = id_of<XAppId>(xapps[i], "id", p);
            const auto &owned = array(xapps[i], "params", p, false);
            for (std::size_t k = 0; k < owned.size(); ++k)
            {
                auto v = get<std::string>(owned[k], at(p + ".params", k));
                if (v.empty())
                    fail(at(p + ".params", k), "identifier must be non-empty");
                a.params.emplace_back(v);
            }
            a.param_range = range(xapps[i], "param_range", p);
            s.agents.push_back(std::move(a));
        }

        const auto &groups = array(doc, "groups", "$", false);
        for (std::size_t i = 0; i < groups.size(); ++i)
        {
            const auto p = at("groups", i);
            ParameterGroup g;
            g.group_id = text(groups[i], "group_id", p);
            const auto &members = array(groups[i], "members", p);
            for (std::size_t k = 0; k < members.size(); ++k)
            {
                auto v = get<std::string>(members[k], at(p + ".members", k));
                if (v.empty())
                    fail(at(p + ".members", k), "identifier must be non-empty");
                g.members.emplace_back(v);
            }
            g.affected_area = groups[i].value("affected_area", std::string{});
            s.groups.push_back(std::move(g));
        }

        const auto &thresholds = array(doc, "thresholds", "$", false);
        for (std::size_t i = 0; i < thresholds.size(); ++i)
        {
            const auto p = at("thresholds", i);
            QoSThreshold t;
            t.kpi = id_of<KpiId>(thresholds[i], "kpi", p);
            t.threshold = number(thresholds[i], "threshold", p);
            const auto dir = thresholds[i].value("direction", std::string("at_least"));
            if (dir != "at_least" && dir != "at_most")
                fail(p + ".direction", "expected \"at_least\" or \"at_most\"");
            t.direction = direction_from_string(dir);
            s.thresholds.push_back(std::move(t));
        }

        if (doc.contains("weights"))
        {
            const auto &w = doc.at("weights");
            if (!w.is_object())
                fail("weights", "expected an object of state -> {xapp: weight}");
            for (const auto &[state, per_xapp] : w.items())
            {
                const auto p = "weights." + state;
                if (!per_xapp.is_object())
                    fail(p, "expected an object of xapp -> weight");
                for (const auto &[xapp, value] : per_xapp.items())
                {
                    if (!value.is_number())
                        fail(p + "." + xapp, "expected a number");
                    if (xapp.empty())
                        fail(p, "identifier must be non-empty");
                    s.weights[state][XAppId(xapp)] = value.get<double>();
                }
            }
        }

        const auto &timeline = array(doc, "timeline", "$", false);
        for (std::size_t i = 0; i < timeline.size(); ++i)
        {
            const auto p = at("timeline", i);
            s.timeline.push_back(TimelineEntry{integer(need(timeline[i], "tick", p), p + ".tick"),
                                               id_of<XAppId>(timeline[i], "xapp", p),
                                               id_of<ParameterId>(timeline[i], "param", p),
                                               number(timeline[i], "value", p)});
        }

        Tick last = 0;
        for (const auto &e : s.timeline)
            last = std::max(last, e.tick);
        s.duration = doc.contains("duration") ? integer(doc.at("duration"), "duration") : last + 10;

        if (doc.contains("solver"))
        {
            const auto &sv = doc.at("solver");
            if (!sv.is_object())
                fail("solver", "expected an object");
            if (sv.contains("method"))
            {
                try
                {
                    s.solver.method = welfare_method_from_string(text(sv, "method", "solver"));
                }
                catch (const Error &)
                {
                    fail("solver.method", "expected one of nswf, eg, am");
                }
            }
            if (sv.contains("samples"))
                s.solver.samples = static_cast<int>(integer(sv.at("samples"), "solver.samples"));
            if (sv.contains("scale"))
                s.solver.scale = number(sv, "scale", "solver");
            if (sv.contains("refinement_passes"))
                s.solver.refinement_passes = static_cast<int>(integer(sv.at("refinement_passes"), "solver.refinement_passes"));
        }
        return s;
    }

    ScenarioSpec parse_scenario_text(const std::string &text)
    {
        ojson doc;
        try
        {
            doc = ojson::parse(text);
        }
        catch (const nlohmann::json::parse_error &e)
        {
            std::size_t line = 1, col = 1;
            for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i)
            {
                if (text[i] == '\n')
                {
                    ++line;
                    col = 1;
                }
                else
                {
                    ++col;
                }
            }
            throw Error(Errc::ParseError, "line " + std::to_string(line) + ", column " + std::to_string(col) +
                                              ": malformed JSON");
        }
        return parse_scenario(doc);
    }

    ScenarioSpec load_scenario(const std::filesystem::path &path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw Error(Errc::Io, "cannot read " + path.string());
        std::stringstream buf;
        buf << in.rdbuf();
        return parse_scenario_text(buf.str());
    }

    std::vector<Diagnostic> validate(const ScenarioSpec &spec)
    {
        std::vector<Diagnostic> out;
        auto diag = [&](std::string field, std::string msg) { out.push_back(Diagnostic{std::move(field), std::move(msg)}); };

        if (spec.recency_window <= 0)
            diag("recency_window", "must be positive");
        if (spec.duration < 0)
            diag("duration", "must be non-negative");

        std::map<ParameterId, Range> params;
        for (std::size_t i = 0; i < spec.parameters.size(); ++i)
        {
            const auto &p = spec.parameters[i];
            const auto f = at("parameters", i);
            if (!params.emplace(p.id, p.range).second)
                diag(f + ".id", "duplicate parameter '" + p.id.str() + "'");
            if (!p.range.valid())
                diag(f + ".range", "min must be < max");
            else if (!p.range.contains(p.default_value))
                diag(f + ".default", "default " + format_double(p.default_value) + " lies outside the range");
        }

        std::set<XAppId> xapps;
        for (std::size_t i = 0; i < spec.agents.size(); ++i)
        {
            const auto &a = spec.agents[i];
            const auto f = at("xapps", i);
            if (a.id == cmc_author())
                diag(f + ".id", "'CMC' is reserved for the mitigation controller");
            if (!xapps.insert(a.id).second)
                diag(f + ".id", "duplicate xApp '" + a.id.str() + "'");
            if (!a.param_range.valid())
                diag(f + ".param_range", "min must be < max");
            for (std::size_t k = 0; k < a.params.size(); ++k)
                if (!params.count(a.params[k]))
                    diag(at(f + ".params", k), "unknown parameter '" + a.params[k].str() + "'");
        }

        std::map<KpiId, const KpiSpec *> kpis;
        for (std::size_t i = 0; i < spec.kpis.size(); ++i)
        {
            const auto &k = spec.kpis[i];
            if (!kpis.emplace(k.id, &k).second)
                diag(at("kpis", i) + ".id", "duplicate KPI '" + k.id.str() + "'");
        }
        std::set<XAppId> owners;
        for (std::size_t i = 0; i < spec.kpis.size(); ++i)
        {
            const auto &k = spec.kpis[i];
            const auto f = at("kpis", i);
            owners.insert(k.owner);
            if (!xapps.count(k.owner))
                diag(f + ".owner", "unknown xApp '" + k.owner.str() + "'");
            if (!k.range.valid())
                diag(f + ".range", "min must be < max");
            const auto &m = k.model;
            if (!(m.amplitude > 0.0))
                diag(f + ".model.amplitude", "must be positive");
            if (!(m.width > 0.0))
                diag(f + ".model.width", "must be positive");
            if (!params.count(m.input))
                diag(f + ".model.input", "unknown parameter '" + m.input.str() + "'");
            if (m.coupling.has_value() != m.coupled_param.has_value())
                diag(f + ".model", "coupling and coupled_param must be given together");
            if (m.coupling && !kpis.count(*m.coupling))
                diag(f + ".model.coupling", "unknown KPI '" + m.coupling->str() + "'");
            if (m.coupled_param && !params.count(*m.coupled_param))
                diag(f + ".model.coupled_param", "unknown parameter '" + m.coupled_param->str() + "'");

            // walk the coupling chain looking for a cycle
            std::set<KpiId> chain{k.id};
            const KpiSpec *cur = &k;
            while (cur->model.coupling)
            {
                auto next = kpis.find(*cur->model.coupling);
                if (next == kpis.end())
                    break;
                if (!chain.insert(next->first).second)
                {
                    diag(f + ".model.coupling", "coupling cycle through '" + next->first.str() + "'");
                    break;
                }
                cur = next->second;
            }
        }
        for (std::size_t i = 0; i < spec.agents.size(); ++i)
            if (!owners.count(spec.agents[i].id))
                diag(at("xapps", i), "xApp '" + spec.agents[i].id.str() + "' owns no KPI");

        for (std::size_t i = 0; i < spec.groups.size(); ++i)
        {
            const auto &g = spec.groups[i];
            const auto f = at("groups", i);
            if (g.group_id.empty())
                diag(f + ".group_id", "must be non-empty");
            if (g.members.size() < 2)
                diag(f + ".members", "a parameter group needs at least two members");
            for (std::size_t k = 0; k < g.members.size(); ++k)
                if (!params.count(g.members[k]))
                    diag(at(f + ".members", k), "unknown parameter '" + g.members[k].str() + "'");
        }

        std::set<KpiId> thresholded;
        for (std::size_t i = 0; i < spec.thresholds.size(); ++i)
        {
            const auto &t = spec.thresholds[i];
            const auto f = at("thresholds", i);
            auto k = kpis.find(t.kpi);
            if (k == kpis.end())
                diag(f + ".kpi", "unknown KPI '" + t.kpi.str() + "'");
            else if (k->second->range.valid() && !k->second->range.contains(t.threshold))
                diag(f + ".threshold", "threshold lies outside the KPI range");
            if (!thresholded.insert(t.kpi).second)
                diag(f + ".kpi", "second threshold for '" + t.kpi.str() + "'");
        }

        for (const auto &[state, per_xapp] : spec.weights)
        {
            const auto f = "weights." + state;
            double sum = 0.0;
            for (const auto &[x, w] : per_xapp)
            {
                if (!xapps.count(x))
                    diag(f + "." + x.str(), "unknown xApp '" + x.str() + "'");
                if (!(w > 0.0 && w < 1.0))
                    diag(f + "." + x.str(), "weight must lie in (0, 1)");
                sum += w;
            }
            if (std::abs(sum - 1.0) > weight_sum_tolerance)
                diag(f, "weight-sum violation: weights sum to " + format_double(sum) + ", must sum to 1");
        }

        for (std::size_t i = 0; i < spec.timeline.size(); ++i)
        {
            const auto &e = spec.timeline[i];
            const auto f = at("timeline", i);
            if (e.tick < 0)
                diag(f + ".tick", "must be non-negative");
            if (i > 0 && e.tick <= spec.timeline[i - 1].tick)
                diag(f + ".tick", "ticks must be strictly increasing");
            if (e.tick > spec.duration)
                diag(f + ".tick", "beyond the scenario duration");
            if (!xapps.count(e.xapp))
                diag(f + ".xapp", "unknown xApp '" + e.xapp.str() + "'");
            auto p = params.find(e.param);
            if (p == params.end())
                diag(f + ".param", "unknown parameter '" + e.param.str() + "'");
            else if (p->second.valid() && !p->second.contains(e.value))
                diag(f + ".value", format_double(e.value) + " outside the range of '" + e.param.str() + "'");
        }

        if (spec.solver.samples < 3)
            diag("solver.samples", "must be >= 3");
        if (!(spec.solver.scale > 0.0))
            diag("solver.scale", "must be positive");
        if (spec.solver.refinement_passes < 0)
            diag("solver.refinement_passes", "must be non-negative");
        return out;
    }
}
