#pragma once

#include "ricsim/channel.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ricsim
{
    /// Gaussian KPI response.
    ///
    /// Uncoupled:  amplitude * exp(-(x - center)^2 / (2 width^2)), x = value of `input`.
    /// Coupled:    amplitude * exp(-(k + x - center)^2 / (2 width^2)), k = value of
    ///             the `coupling` KPI, x = value of `coupled_param`.
    struct UtilityFunctionSpec
    {
        double amplitude = 1.0;
        double center = 0.0;
        double width = 1.0;
        ParameterId input;
        std::optional<KpiId> coupling;
        std::optional<ParameterId> coupled_param;

        void validate() const;
    };

    double eval_kpi(const UtilityFunctionSpec &spec, double x, std::optional<double> coupled_kpi_value = std::nullopt);

    using ParamAssignment = std::map<ParameterId, double>;

    /// A set of KPI models that can be evaluated against a parameter
    /// assignment, resolving couplings recursively.
    class KpiModel
    {
    public:
        void add(const KpiId &id, UtilityFunctionSpec spec);
        bool contains(const KpiId &id) const { return specs_.count(id) != 0; }
        const UtilityFunctionSpec &spec(const KpiId &id) const;

        /// Copy holding `roots` and everything they are coupled to.
        KpiModel closure(const std::vector<KpiId> &roots) const;

        double evaluate(const KpiId &id, const ParamAssignment &params) const;

    private:
        double evaluate(const KpiId &id, const ParamAssignment &params, int depth) const;

        std::map<KpiId, UtilityFunctionSpec> specs_;
    };

    /// Simulated xApp. Agents never talk to each other: a reply depends only
    /// on the agent's own model, its last observed configuration and the
    /// queried value.
    class XAppAgent
    {
    public:
        XAppAgent(XAppId id, std::vector<KpiId> kpis, KpiModel model, Range param_range,
                  std::map<std::string, double> weight_by_state);

        const XAppId &id() const noexcept { return id_; }
        const std::vector<KpiId> &kpis() const noexcept { return kpis_; }
        Range param_range() const noexcept { return param_range_; }
        const std::map<std::string, double> &weights() const noexcept { return weight_by_state_; }

        /// Latest network configuration, pushed by the RAN side every tick.
        void observe(const ParamAssignment &params) { observed_ = params; }

        std::vector<std::pair<KpiId, double>> kpis_at(const ParamAssignment &params) const;

        /// Answers a query. `x` is clamped into the agent's range. The first
        /// query of a session gets range and weight in the reply (UnknownState
        /// if no weight is registered for the query's state tag).
        ChannelMessage handle_query(const ChannelMessage &msg);

    private:
        XAppId id_;
        std::vector<KpiId> kpis_;
        KpiModel model_;
        Range param_range_;
        std::map<std::string, double> weight_by_state_;
        ParamAssignment observed_;
        std::optional<std::uint64_t> session_;
    };

    /// In-process channel 2: routes queries to registered agents. With
    /// logging enabled every message exchanged is kept.
    class LocalChannel : public Channel
    {
    public:
        void attach(XAppAgent &agent) { agents_[agent.id()] = &agent; }
        void detach(const XAppId &id) { agents_.erase(id); }

        std::optional<ChannelMessage> exchange(const XAppId &to, const ChannelMessage &query) override;

        void set_logging(bool on) { logging_ = on; }
        const std::vector<std::pair<XAppId, ChannelMessage>> &log() const noexcept { return log_; }
        void clear_log() { log_.clear(); }

    private:
        std::map<XAppId, XAppAgent *> agents_;
        std::vector<std::pair<XAppId, ChannelMessage>> log_;
        bool logging_ = false;
    };
}
