#pragma once

#include "ricsim/error.hpp"

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ricsim
{
    /// Simulation clock. Unitless and integer so that replay is exact.
    using Tick = std::int64_t;

    /// Non-empty opaque identifier, distinct per Tag so a KPI id cannot be
    /// passed where a parameter id is expected.
    template <typename Tag>
    class Id
    {
    public:
        Id() = default;
        explicit Id(std::string value) : value_(std::move(value))
        {
            if (value_.empty())
                throw Error(Errc::InvalidArgument, std::string(Tag::kind) + " id must be non-empty");
        }

        const std::string &str() const noexcept { return value_; }
        bool empty() const noexcept { return value_.empty(); }

        friend auto operator<=>(const Id &, const Id &) = default;
        friend bool operator==(const Id &, const Id &) = default;

    private:
        std::string value_;
    };

    struct ParameterTag { static constexpr const char *kind = "parameter"; };
    struct KpiTag { static constexpr const char *kind = "kpi"; };
    struct XAppTag { static constexpr const char *kind = "xapp"; };

    using ParameterId = Id<ParameterTag>;
    using KpiId = Id<KpiTag>;
    using XAppId = Id<XAppTag>;

    /// Reserved author id for changes committed by the mitigation controller.
    inline XAppId cmc_author() { return XAppId("CMC"); }

    struct Range
    {
        double min = 0.0;
        double max = 0.0;

        bool valid() const noexcept { return min < max; }
        bool contains(double v) const noexcept { return v >= min && v <= max; }
        double clamp(double v) const noexcept { return v < min ? min : (v > max ? max : v); }
        double span() const noexcept { return max - min; }

        friend bool operator==(const Range &, const Range &) = default;
    };

    enum class Direction
    {
        AtLeast,
        AtMost,
    };

    struct QoSThreshold
    {
        KpiId kpi;
        double threshold = 0.0;
        Direction direction = Direction::AtLeast;

        /// Boundary values satisfy the threshold.
        bool satisfied_by(double value) const noexcept
        {
            return direction == Direction::AtLeast ? value >= threshold : value <= threshold;
        }
    };

    struct ParameterChangeRecord
    {
        ParameterId param;
        XAppId xapp;
        double old_value = 0.0;
        double new_value = 0.0;
        Tick timestamp = 0;

        friend bool operator==(const ParameterChangeRecord &, const ParameterChangeRecord &) = default;
    };

    struct ParameterGroup
    {
        std::string group_id;
        std::vector<ParameterId> members;
        std::string affected_area;

        bool contains(const ParameterId &p) const
        {
            for (const auto &m : members)
                if (m == p)
                    return true;
            return false;
        }

        friend bool operator==(const ParameterGroup &, const ParameterGroup &) = default;
    };

    struct GroupChangeRecord
    {
        ParameterChangeRecord change;
        std::string group_id;
        std::vector<ParameterId> co_members;
    };

    struct DegradationEvent
    {
        KpiId kpi;
        double observed_value = 0.0;
        Tick timestamp = 0;
        std::optional<ParameterChangeRecord> suspect_change;
    };

    std::string_view to_string(Direction d) noexcept;
    Direction direction_from_string(std::string_view s);

    /// Shortest round-trip decimal rendering, used by every text artifact so
    /// that output is byte-stable across runs.
    std::string format_double(double v);
}

template <typename Tag>
struct std::hash<ricsim::Id<Tag>>
{
    std::size_t operator()(const ricsim::Id<Tag> &id) const noexcept
    {
        return std::hash<std::string>{}(id.str());
    }
};
