#include "ricsim/xapp_agent.hpp"

#include <cmath>
#include <set>

namespace ricsim
{
    void UtilityFunctionSpec::validate() const
    {
        if (!(amplitude > 0.0))
            throw Error(Errc::InvalidArgument, "amplitude must be positive");
        if (!(width > 0.0))
            throw Error(Errc::InvalidArgument, "width must be positive");
        if (coupling.has_value() != coupled_param.has_value())
            throw Error(Errc::InvalidArgument, "coupling and coupled_param must be given together");
    }

    double eval_kpi(const UtilityFunctionSpec &spec, double x, std::optional<double> coupled_kpi_value)
    {
        double arg = x - spec.center;
        if (spec.coupling)
        {
            if (!coupled_kpi_value)
                throw Error(Errc::MissingCoupledValue, "KPI coupled to " + spec.coupling->str() + " evaluated without its value");
            arg += *coupled_kpi_value;
        }
        return spec.amplitude * std::exp(-(arg * arg) / (2.0 * spec.width * spec.width));
    }

    // --- KpiModel -----------------------------------------------------------------

    void KpiModel::add(const KpiId &id, UtilityFunctionSpec spec)
    {
        spec.validate();
        specs_[id] = std::move(spec);
    }

    const UtilityFunctionSpec &KpiModel::spec(const KpiId &id) const
    {
        auto it = specs_.find(id);
        if (it == specs_.end())
            throw Error(Errc::UnknownKpi, id.str());
        return it->second;
    }

    KpiModel KpiModel::closure(const std::vector<KpiId> &roots) const
    {
        KpiModel out;
        std::vector<KpiId> pending(roots);
        while (!pending.empty())
        {
            KpiId id = pending.back();
            pending.pop_back();
            if (out.contains(id))
                continue;
            const auto &s = spec(id);
            out.specs_[id] = s;
            if (s.coupling)
                pending.push_back(*s.coupling);
        }
        return out;
    }

    double KpiModel::evaluate(const KpiId &id, const ParamAssignment &params) const
    {
        return evaluate(id, params, 0);
    }

    double KpiModel::evaluate(const KpiId &id, const ParamAssignment &params, int depth) const
    {
        if (depth > static_cast<int>(specs_.size()))
            throw Error(Errc::InvalidArgument, "coupling cycle through " + id.str());
        const auto &s = spec(id);
        auto lookup = [&](const ParameterId &p) {
            auto it = params.find(p);
            if (it == params.end())
                throw Error(Errc::UnknownParameter, p.str() + " has no value");
            return it->second;
        };
        if (s.coupling)
            return eval_kpi(s, lookup(*s.coupled_param), evaluate(*s.coupling, params, depth + 1));
        return eval_kpi(s, lookup(s.input));
    }

    // --- XAppAgent ------------------------------------------------------------------

    XAppAgent::XAppAgent(XAppId id, std::vector<KpiId> kpis, KpiModel model, Range param_range,
                         std::map<std::string, double> weight_by_state)
        : id_(std::move(id)), kpis_(std::move(kpis)), model_(std::move(model)), param_range_(param_range),
          weight_by_state_(std::move(weight_by_state))
    {
        if (kpis_.empty())
            throw Error(Errc::InvalidArgument, "xApp " + id_.str() + " has no KPIs");
        if (!param_range_.valid())
            throw Error(Errc::DegenerateRange, "xApp " + id_.str() + " parameter range");
        for (const auto &k : kpis_)
            model_.spec(k);
    }

    std::vector<std::pair<KpiId, double>> XAppAgent::kpis_at(const ParamAssignment &params) const
    {
        std::vector<std::pair<KpiId, double>> out;
        out.reserve(kpis_.size());
        for (const auto &k : kpis_)
            out.emplace_back(k, model_.evaluate(k, params));
        return out;
    }

    ChannelMessage XAppAgent::handle_query(const ChannelMessage &msg)
    {
        const auto *q = std::get_if<QueryPayload>(&msg.payload);
        if (!q || msg.direction != MessageDirection::CmcToXApp)
            throw Error(Errc::ProtocolViolation, id_.str() + " received a non-query message");

        XAppReply reply;
        reply.xapp = id_;
        if (!session_ || *session_ != q->session)
        {
            auto w = weight_by_state_.find(q->state_tag);
            if (w == weight_by_state_.end())
                throw Error(Errc::UnknownState, id_.str() + " has no weight for state '" + q->state_tag + "'");
            reply.param_range = param_range_;
            reply.weight = w->second;
            session_ = q->session;
        }

        ParamAssignment params = observed_;
        params[q->param] = param_range_.clamp(q->x);
        reply.kpis = kpis_at(params);
        return ChannelMessage{msg.correlation_id, MessageDirection::XAppToCmc, std::move(reply)};
    }

    // --- LocalChannel -------------------------------------------------------------------

    std::optional<ChannelMessage> LocalChannel::exchange(const XAppId &to, const ChannelMessage &query)
    {
        if (logging_)
            log_.emplace_back(to, query);
        auto it = agents_.find(to);
        if (it == agents_.end())
            return std::nullopt;
        auto reply = it->second->handle_query(query);
        if (logging_)
            log_.emplace_back(to, reply);
        return reply;
    }
}
