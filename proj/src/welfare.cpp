#include "ricsim/welfare.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>
#include <numeric>

namespace ricsim
{
    std::string_view to_string(WelfareMethod m) noexcept
    {
        switch (m)
        {
        case WelfareMethod::Nswf: return "nswf";
        case WelfareMethod::Eg: return "eg";
        case WelfareMethod::Am: return "am";
        }
        return "unknown";
    }

    WelfareMethod welfare_method_from_string(std::string_view s)
    {
        std::string lower(s);
        for (auto &c : lower)
            c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        if (lower == "nswf")
            return WelfareMethod::Nswf;
        if (lower == "eg")
            return WelfareMethod::Eg;
        if (lower == "am")
            return WelfareMethod::Am;
        throw Error(Errc::InvalidArgument, "unknown welfare method '" + std::string(s) + "'");
    }

    Range optimal_range(std::span<const Range> ranges)
    {
        if (ranges.empty())
            throw Error(Errc::EmptyInput, "no parameter ranges to combine");
        Range out = ranges.front();
        for (const auto &r : ranges)
        {
            if (!r.valid())
                throw Error(Errc::DegenerateRange, "range [" + format_double(r.min) + ", " + format_double(r.max) + "]");
            out.min = std::min(out.min, r.min);
            out.max = std::max(out.max, r.max);
        }
        return out;
    }

    double normalize_utility(std::span<const KpiReading> kpis, double scale)
    {
        if (kpis.empty())
            throw Error(Errc::EmptyInput, "an xApp must report at least one KPI");
        if (!(scale > 0.0))
            throw Error(Errc::InvalidArgument, "utility scale must be positive");
        double sum = 0.0;
        for (const auto &k : kpis)
        {
            if (!k.range.valid())
                throw Error(Errc::DegenerateRange, "KPI range [" + format_double(k.range.min) + ", " +
                                                       format_double(k.range.max) + "]");
            const double v = k.range.clamp(k.value);
            sum += (v - k.range.min) / k.range.span() * scale;
        }
        // rounding in the mean can overshoot by an ulp
        return std::min(scale, sum / static_cast<double>(kpis.size()));
    }

    double nswf(std::span<const double> utilities)
    {
        if (utilities.size() < 2)
            throw Error(Errc::TooFewXApps, "NSWF needs at least two xApps");
        return std::accumulate(utilities.begin(), utilities.end(), 1.0, std::multiplies<>());
    }

    void validate_weights(std::span<const double> weights)
    {
        double sum = 0.0;
        for (double w : weights)
        {
            if (!(w > 0.0))
                throw Error(Errc::WeightSumViolation, "weight " + format_double(w) + " is not positive");
            sum += w;
        }
        if (std::abs(sum - 1.0) > weight_sum_tolerance)
            throw Error(Errc::WeightSumViolation, "weights sum to " + format_double(sum) + ", expected 1");
    }

    double eg_objective(std::span<const double> utilities, std::span<const double> weights)
    {
        if (utilities.size() != weights.size())
            throw Error(Errc::DimensionMismatch, std::to_string(utilities.size()) + " utilities vs " +
                                                     std::to_string(weights.size()) + " weights");
        if (utilities.size() < 2)
            throw Error(Errc::TooFewXApps, "EG needs at least two xApps");
        validate_weights(weights);
        double f = 0.0;
        for (std::size_t i = 0; i < utilities.size(); ++i)
            f += weights[i] * utilities[i];
        return f;
    }

    double am_objective(std::span<const double> utilities)
    {
        if (utilities.size() < 2)
            throw Error(Errc::TooFewXApps, "AM needs at least two xApps");
        return std::accumulate(utilities.begin(), utilities.end(), 0.0) / static_cast<double>(utilities.size());
    }

    double welfare(WelfareMethod method, std::span<const double> utilities, std::span<const double> weights)
    {
        switch (method)
        {
        case WelfareMethod::Nswf: return nswf(utilities);
        case WelfareMethod::Eg: return eg_objective(utilities, weights);
        case WelfareMethod::Am: return am_objective(utilities);
        }
        throw Error(Errc::InvalidArgument, "unknown welfare method");
    }
}
