#pragma once

#include "ricsim/types.hpp"

#include <span>
#include <string_view>

namespace ricsim
{
    enum class WelfareMethod
    {
        Nswf, // product of utilities
        Eg,   // weighted sum under sum(w) = 1
        Am,   // unweighted arithmetic mean
    };

    std::string_view to_string(WelfareMethod m) noexcept;
    WelfareMethod welfare_method_from_string(std::string_view s);

    inline constexpr double weight_sum_tolerance = 1e-9;

    /// Hull of all ranges: (min of mins, max of maxes).
    Range optimal_range(std::span<const Range> ranges);

    struct KpiReading
    {
        double value = 0.0;
        Range range;
    };

    /// Min-max normalised mean of the readings, scaled to [0, scale]. Values
    /// are clamped into their range first.
    double normalize_utility(std::span<const KpiReading> kpis, double scale);

    double nswf(std::span<const double> utilities);
    double eg_objective(std::span<const double> utilities, std::span<const double> weights);
    double am_objective(std::span<const double> utilities);

    /// WeightSumViolation unless every weight is positive and they sum to 1.
    void validate_weights(std::span<const double> weights);

    /// Dispatches on `method`; `weights` is only read for Eg.
    double welfare(WelfareMethod method, std::span<const double> utilities, std::span<const double> weights);
}
