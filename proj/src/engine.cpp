#include "ricsim/engine.hpp"

#include "ricsim/csv.hpp"
#include "ricsim/welfare.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <ostream>

namespace ricsim
{
    namespace
    {
        struct PendingCommit
        {
            double value = 0.0;
            std::size_t conflict = 0;
        };
    }

    RunReport run_scenario(const ScenarioSpec &spec, const EngineOptions &options)
    {
        if (auto diags = validate(spec); !diags.empty())
            throw Error(Errc::ValidationError, to_string(diags.front()) +
                                                   (diags.size() > 1 ? " (+" + std::to_string(diags.size() - 1) + " more)" : ""));

        SolverConfig solver = spec.solver;
        if (options.method)
            solver.method = *options.method;
        if (options.samples)
            solver.samples = *options.samples;
        solver.validate();

        RunReport report;
        report.scenario = spec.name;
        report.methods.push_back(solver.method);
        if (options.all_methods)
            for (auto m : {WelfareMethod::Nswf, WelfareMethod::Eg, WelfareMethod::Am})
                if (m != solver.method)
                    report.methods.push_back(m);

        auto warn = [&report](std::string_view msg) { report.warnings.emplace_back(msg); };

        SdlStore &store = report.store;
        store.set_recency_window(spec.recency_window);
        for (const auto &p : spec.parameters)
            store.register_parameter(p.id, p.range, p.default_value);
        for (const auto &k : spec.kpis)
            store.register_kpi(k.id, k.range);
        for (const auto &g : spec.groups)
            store.register_group(g);
        for (const auto &t : spec.thresholds)
            store.register_threshold(t);

        KpiModel world;
        for (const auto &k : spec.kpis)
            world.add(k.id, k.model);

        std::vector<std::unique_ptr<XAppAgent>> agents;
        LocalChannel channel;
        ParameterOwnership ownership;
        for (const auto &a : spec.agents)
        {
            std::vector<KpiId> own;
            for (const auto &k : spec.kpis)
                if (k.owner == a.id)
                    own.push_back(k.id);
            std::map<std::string, double> weights;
            for (const auto &[state, per_xapp] : spec.weights)
                if (auto w = per_xapp.find(a.id); w != per_xapp.end())
                    weights[state] = w->second;
            agents.push_back(std::make_unique<XAppAgent>(a.id, own, world.closure(own), a.param_range, std::move(weights)));
            channel.attach(*agents.back());
            ownership[a.id] = std::set<ParameterId>(a.params.begin(), a.params.end());
        }

        PerformanceMonitor pmon(store, warn);
        ConflictDetector cdc(store, ownership);
        MitigationController cmc(store);

        std::map<Tick, const TimelineEntry *> timeline;
        for (const auto &e : spec.timeline)
            timeline[e.tick] = &e;

        std::map<ParameterId, PendingCommit> pending;
        std::map<ParameterId, XAppId> last_author;

        for (Tick t = 0; t <= spec.duration || !pending.empty(); ++t)
        {
            const TimelineEntry *scheduled = nullptr;
            if (auto it = timeline.find(t); it != timeline.end())
                scheduled = it->second;

            for (const auto &[param, commit] : pending)
            {
                if (scheduled && scheduled->param == param)
                {
                    warn("t=" + std::to_string(t) + ": " + scheduled->xapp.str() + " changes " + param.str() +
                         ", superseding the pending CMC value " + format_double(commit.value));
                    continue;
                }
                store.record_change({param, cmc_author(), store.current_value(param), commit.value, t});
                last_author[param] = cmc_author();
                report.conflicts[commit.conflict].commit_tick = t;
            }
            pending.clear();

            if (scheduled)
            {
                store.record_change({scheduled->param, scheduled->xapp, store.current_value(scheduled->param), scheduled->value, t});
                last_author[scheduled->param] = scheduled->xapp;
            }

            ParamAssignment assignment;
            for (const auto &p : spec.parameters)
                assignment[p.id] = store.current_value(p.id);
            for (auto &a : agents)
                a->observe(assignment);

            std::vector<KpiSample> samples;
            for (const auto &k : spec.kpis)
                samples.push_back(KpiSample{k.id, k.owner, world.evaluate(k.id, assignment), t});

            std::vector<KpiTraceRow> trace;
            const auto triggers = pmon.scan_and_trigger(samples, t, &trace);

            for (const auto &p : spec.parameters)
            {
                auto author = last_author.find(p.id);
                report.series.push_back(SeriesRow{t, "param", p.id.str(), author == last_author.end() ? "" : author->second.str(),
                                                  assignment[p.id], std::nullopt, ""});
            }
            std::map<KpiId, KpiStatus> status_now;
            for (const auto &row : trace)
            {
                const KpiReading reading{row.value, store.kpi_range(row.kpi)};
                report.series.push_back(SeriesRow{t, "kpi", row.kpi.str(), row.xapp.str(), row.value,
                                                  normalize_utility(std::span(&reading, 1), solver.scale),
                                                  std::string(to_string(row.status))});
                status_now[row.kpi] = row.status;
            }

            for (auto &c : report.conflicts)
            {
                if (c.commit_tick == t && status_now[c.report.trigger.kpi] == KpiStatus::Breach)
                {
                    c.breach_persisted = true;
                    warn("t=" + std::to_string(t) + ": " + c.report.trigger.kpi.str() +
                         " still breaches its threshold after mitigation; keeping the suggested value");
                }
            }

            for (const auto &trig : triggers)
            {
                report.triggers.push_back(trig);
                const auto &suspect = trig.degradation.suspect_change;
                if (!suspect)
                {
                    report.skipped.push_back({trig, "no parameter change recorded"});
                    continue;
                }
                if (suspect->xapp == cmc_author())
                {
                    report.skipped.push_back({trig, "degradation follows a CMC commit; not re-mitigated"});
                    continue;
                }

                ConflictOutcome outcome;
                try
                {
                    outcome.report = cdc.classify_conflict(trig);
                }
                catch (const Error &e)
                {
                    if (e.code() == Errc::NoCounterparty)
                    {
                        report.skipped.push_back({trig, e.what()});
                        continue;
                    }
                    report.aborted = true;
                    report.abort_reason = e.what();
                    return report;
                }

                try
                {
                    for (auto m : report.methods)
                    {
                        SolverConfig cfg = solver;
                        cfg.method = m;
                        outcome.results.push_back(cmc.mitigate(outcome.report, cfg, channel));
                    }
                }
                catch (const Error &e)
                {
                    report.conflicts.push_back(std::move(outcome));
                    report.aborted = true;
                    report.abort_reason = e.what();
                    return report;
                }

                const auto &param = outcome.report.parameter;
                if (pending.count(param))
                    warn("t=" + std::to_string(t) + ": a second mitigation of " + param.str() + " replaces the first");
                pending[param] = PendingCommit{outcome.committed().suggested_value, report.conflicts.size()};
                report.conflicts.push_back(std::move(outcome));
            }
        }
        return report;
    }

    void write_timeseries_csv(std::ostream &out, const RunReport &report)
    {
        csv::write_row(out, {"tick", "series", "id", "owner", "value", "utility", "status"});
        for (const auto &r : report.series)
            csv::write_row(out, {std::to_string(r.tick), r.series, r.id, r.owner, format_double(r.value),
                                 r.utility ? format_double(*r.utility) : "", r.status});
    }

    ojson summary_json(const RunReport &report)
    {
        ojson j;
        j["scenario"] = report.scenario;
        ojson methods = ojson::array();
        for (auto m : report.methods)
            methods.push_back(std::string(to_string(m)));
        j["methods"] = std::move(methods);
        j["aborted"] = report.aborted;
        j["abort_reason"] = report.abort_reason;
        j["triggers"] = report.triggers.size();

        ojson conflicts = ojson::array();
        for (std::size_t i = 0; i < report.conflicts.size(); ++i)
        {
            const auto &c = report.conflicts[i];
            ojson cj;
            cj["index"] = i;
            cj["tick"] = c.report.trigger.timestamp;
            cj["kind"] = std::string(to_string(c.report.kind));
            cj["parameter"] = c.report.parameter.str();
            cj["degraded_kpi"] = c.report.trigger.kpi.str();
            ojson z = ojson::array();
            for (const auto &x : c.report.involved_xapps)
                z.push_back(x.str());
            cj["involved_xapps"] = std::move(z);
            cj["commit_tick"] = c.commit_tick ? ojson(*c.commit_tick) : ojson(nullptr);
            cj["breach_persisted"] = c.breach_persisted;
            ojson results = ojson::array();
            for (const auto &r : c.results)
                results.push_back(to_json(r));
            cj["results"] = std::move(results);
            conflicts.push_back(std::move(cj));
        }
        j["conflicts"] = std::move(conflicts);

        ojson skipped = ojson::array();
        for (const auto &s : report.skipped)
        {
            ojson sj;
            sj["tick"] = s.trigger.timestamp;
            sj["kpi"] = s.trigger.kpi.str();
            sj["reason"] = s.reason;
            skipped.push_back(std::move(sj));
        }
        j["skipped_triggers"] = std::move(skipped);
        j["warnings"] = report.warnings;
        return j;
    }

    void write_conflict_log(std::ostream &out, const RunReport &report)
    {
        for (const auto &c : report.conflicts)
            out << to_json(c.report).dump() << '\n';
    }
}
