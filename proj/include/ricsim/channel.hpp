#pragma once

#include "ricsim/types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace ricsim
{
    /// CMC -> xApp: "what would your KPIs be if `param` were `x`?"
    struct QueryPayload
    {
        std::uint64_t session = 0; // one mitigation run
        std::string state_tag;     // network state the weights were issued for
        ParameterId param;
        double x = 0.0;
    };

    /// xApp -> CMC. The first reply of a session also carries the xApp's range
    /// for the conflicting parameter and its priority weight; later replies
    /// carry KPIs only.
    struct XAppReply
    {
        XAppId xapp;
        std::vector<std::pair<KpiId, double>> kpis;
        std::optional<Range> param_range;
        std::optional<double> weight;
    };

    enum class MessageDirection
    {
        CmcToXApp,
        XAppToCmc,
    };

    struct ChannelMessage
    {
        std::uint64_t correlation_id = 0;
        MessageDirection direction = MessageDirection::CmcToXApp;
        std::variant<QueryPayload, XAppReply> payload;
    };

    /// Dedicated CMC <-> xApp messaging channel. Replies are matched to
    /// queries by correlation id only; no ordering across xApps is implied.
    class Channel
    {
    public:
        virtual ~Channel() = default;

        /// Delivers `query` to `to` and returns its reply, or nullopt when the
        /// xApp does not answer.
        virtual std::optional<ChannelMessage> exchange(const XAppId &to, const ChannelMessage &query) = 0;
    };
}
