#include "ricsim/grid_search.hpp"

#include <algorithm>
#include <set>

namespace ricsim
{
    std::vector<double> uniform_grid(Range range, int samples)
    {
        if (samples < 2)
            throw Error(Errc::InvalidArgument, "a grid needs at least two samples");
        std::vector<double> xs(static_cast<std::size_t>(samples));
        const double step = range.span() / (samples - 1);
        for (int k = 0; k < samples; ++k)
            xs[static_cast<std::size_t>(k)] = range.min + k * step;
        xs.back() = range.max;
        return xs;
    }

    GridSearchResult grid_search(Range range, int samples, int refinement_passes,
                                 std::span<const double> extra_points,
                                 const std::function<double(double)> &objective)
    {
        if (!(range.min <= range.max))
            throw Error(Errc::EmptyRange, "search range is empty");
        if (samples < 3)
            throw Error(Errc::InvalidArgument, "samples must be >= 3");
        if (refinement_passes < 0)
            throw Error(Errc::InvalidArgument, "refinement passes must be non-negative");

        GridSearchResult result;
        std::set<double> seen;
        bool have_best = false;

        auto evaluate = [&](std::vector<double> xs, int pass) {
            std::sort(xs.begin(), xs.end());
            for (double x : xs)
            {
                if (!seen.insert(x).second)
                    continue;
                const double v = objective(x);
                ++result.evaluations;
                result.trace.push_back(GridPoint{x, v, pass});
                if (!have_best || v > result.value || (v == result.value && x < result.x))
                {
                    result.x = x;
                    result.value = v;
                    have_best = true;
                }
            }
        };

        if (range.span() == 0.0)
        {
            evaluate({range.min}, 0);
            return result;
        }

        auto coarse = uniform_grid(range, samples);
        for (double x : extra_points)
            if (range.contains(x))
                coarse.push_back(x);
        evaluate(std::move(coarse), 0);

        double step = range.span() / (samples - 1);
        for (int pass = 1; pass <= refinement_passes; ++pass)
        {
            const Range local{std::max(range.min, result.x - step), std::min(range.max, result.x + step)};
            if (!(local.span() > 0.0))
                break;
            evaluate(uniform_grid(local, samples), pass);
            step = local.span() / (samples - 1);
        }
        return result;
    }
}
