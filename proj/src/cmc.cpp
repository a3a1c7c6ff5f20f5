#include "ricsim/cmc.hpp"

#include "ricsim/csv.hpp"
#include "ricsim/grid_search.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <ostream>

namespace ricsim
{
    void SolverConfig::validate() const
    {
        if (samples < 3)
            throw Error(Errc::InvalidArgument, "samples must be >= 3");
        if (!(scale > 0.0))
            throw Error(Errc::InvalidArgument, "scale must be positive");
        if (refinement_passes < 0)
            throw Error(Errc::InvalidArgument, "refinement_passes must be non-negative");
    }

    ojson to_json(const MitigationResult &r)
    {
        auto per_xapp = [&](const std::vector<double> &v) {
            ojson j = ojson::object();
            for (std::size_t i = 0; i < r.xapps.size() && i < v.size(); ++i)
                j[r.xapps[i].str()] = v[i];
            return j;
        };
        ojson j;
        j["method"] = std::string(to_string(r.method));
        j["suggested_value"] = r.suggested_value;
        j["welfare"] = r.welfare;
        j["utilities"] = per_xapp(r.utilities);
        j["weights"] = per_xapp(r.weights);
        j["baseline_value"] = r.baseline_value;
        j["baseline_welfare"] = r.baseline_welfare;
        j["baseline_utilities"] = per_xapp(r.baseline_utilities);
        j["optimal_range"] = to_json(r.optimal_range);
        j["evaluations"] = r.evaluations;
        j["query_budget"] = r.query_budget;
        return j;
    }

    void write_welfare_trace_csv(std::ostream &out, const std::vector<std::pair<std::size_t, const MitigationResult *>> &results)
    {
        std::size_t width = 0;
        for (const auto &[_, r] : results)
            width = std::max(width, r->xapps.size());
        std::vector<std::string> header{"conflict", "method", "pass", "x", "welfare"};
        for (std::size_t i = 0; i < width; ++i)
        {
            header.push_back("xapp_" + std::to_string(i + 1));
            header.push_back("utility_" + std::to_string(i + 1));
        }
        csv::write_row(out, header);

        for (const auto &[conflict, r] : results)
        {
            // sorted by x so the file plots directly as a curve
            std::vector<const WelfareTracePoint *> pts;
            for (const auto &p : r->trace)
                pts.push_back(&p);
            std::stable_sort(pts.begin(), pts.end(), [](auto *a, auto *b) { return a->x < b->x; });
            for (const auto *p : pts)
            {
                std::vector<std::string> row{std::to_string(conflict), std::string(to_string(r->method)),
                                             std::to_string(p->pass), format_double(p->x), format_double(p->welfare)};
                for (std::size_t i = 0; i < width; ++i)
                {
                    row.push_back(i < r->xapps.size() ? r->xapps[i].str() : "");
                    row.push_back(i < p->utilities.size() ? format_double(p->utilities[i]) : "");
                }
                csv::write_row(out, row);
            }
        }
    }

    namespace
    {
        // Sessions must be unique across controllers: agents outlive any one
        // controller and key their first-reply state on the session id.
        std::uint64_t next_session()
        {
            static std::atomic<std::uint64_t> counter{1};
            return counter.fetch_add(1, std::memory_order_relaxed);
        }
    }

    MitigationController::MitigationController(const SdlStore &store) : store_(store) {}

    MitigationResult MitigationController::mitigate(const ConflictReport &report, const SolverConfig &config, Channel &channel)
    {
        config.validate();
        const auto &z = report.involved_xapps;
        if (z.size() < 2)
            throw Error(Errc::TooFewXApps, "a conflict needs at least two xApps");

        const std::uint64_t session = next_session();
        const std::string state_tag(to_string(report.kind));

        MitigationResult result;
        result.method = config.method;
        result.xapps = z;
        result.baseline_value = report.bad_state.param_value;

        // injected: bad state, good state and each member's own demand
        std::vector<double> injected{report.bad_state.param_value, report.good_state.param_value};
        for (const auto &[_, v] : report.demanded_values)
            injected.push_back(v);

        result.query_budget =
            z.size() * (1 + static_cast<std::size_t>(config.samples) * (1 + static_cast<std::size_t>(config.refinement_passes)) +
                        injected.size());

        std::map<KpiId, Range> kpi_ranges;
        auto kpi_range = [&](const KpiId &id) {
            auto it = kpi_ranges.find(id);
            if (it == kpi_ranges.end())
                it = kpi_ranges.emplace(id, store_.kpi_range(id)).first;
            return it->second;
        };

        auto ask = [&](const XAppId &xapp, double x) -> XAppReply {
            if (result.evaluations >= result.query_budget)
                throw Error(Errc::ProtocolViolation, "query budget of " + std::to_string(result.query_budget) + " exhausted");
            ChannelMessage q{next_correlation_++, MessageDirection::CmcToXApp,
                             QueryPayload{session, state_tag, report.parameter, x}};
            ++result.evaluations;
            auto reply = channel.exchange(xapp, q);
            if (!reply)
                throw Error(Errc::UnresponsiveXApp, xapp.str() + " did not answer query " + std::to_string(q.correlation_id));
            if (reply->correlation_id != q.correlation_id || reply->direction != MessageDirection::XAppToCmc)
                throw Error(Errc::ProtocolViolation, "reply does not match query " + std::to_string(q.correlation_id));
            auto *payload = std::get_if<XAppReply>(&reply->payload);
            if (!payload || payload->xapp != xapp)
                throw Error(Errc::ProtocolViolation, "malformed reply from " + xapp.str());
            return std::move(*payload);
        };

        auto utility_of = [&](const XAppReply &reply) {
            std::vector<KpiReading> readings;
            for (const auto &[kpi, v] : reply.kpis)
                readings.push_back(KpiReading{v, kpi_range(kpi)});
            return normalize_utility(readings, config.scale);
        };

        // First round-trip at the current (degraded) value.
        std::vector<Range> ranges;
        for (const auto &xapp : z)
        {
            auto reply = ask(xapp, report.bad_state.param_value);
            if (!reply.param_range || !reply.weight)
                throw Error(Errc::ProtocolViolation, "first reply from " + xapp.str() + " lacks range or weight");
            if (!reply.param_range->valid())
                throw Error(Errc::EmptyRange, xapp.str() + " reported an empty parameter range");
            ranges.push_back(*reply.param_range);
            result.weights.push_back(*reply.weight);
            result.baseline_utilities.push_back(utility_of(reply));
        }
        if (config.method == WelfareMethod::Eg)
            validate_weights(result.weights);

        const Range hull = optimal_range(ranges);
        const Range pkr = store_.parameter_range(report.parameter);
        result.optimal_range = Range{std::max(hull.min, pkr.min), std::min(hull.max, pkr.max)};
        if (result.optimal_range.min > result.optimal_range.max)
            throw Error(Errc::EmptyRange, "xApp ranges do not intersect the admissible range of " + report.parameter.str());

        result.baseline_welfare = welfare(config.method, result.baseline_utilities, result.weights);

        std::map<double, std::vector<double>> utilities_at;
        auto objective = [&](double x) {
            std::vector<double> u;
            u.reserve(z.size());
            for (const auto &xapp : z)
                u.push_back(utility_of(ask(xapp, x)));
            const double w = welfare(config.method, u, result.weights);
            utilities_at[x] = std::move(u);
            return w;
        };

        auto search = grid_search(result.optimal_range, config.samples, config.refinement_passes, injected, objective);

        result.suggested_value = search.x;
        result.welfare = search.value;
        result.utilities = utilities_at.at(search.x);
        result.trace.reserve(search.trace.size());
        for (const auto &p : search.trace)
            result.trace.push_back(WelfareTracePoint{p.x, p.value, p.pass, utilities_at.at(p.x)});
        return result;
    }
}
