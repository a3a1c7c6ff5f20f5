#pragma once

#include "ricsim/types.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace ricsim
{
    struct GridPoint
    {
        double x = 0.0;
        double value = 0.0;
        int pass = 0; // 0 = coarse grid (with injected points), 1.. = refinement
    };

    struct GridSearchResult
    {
        double x = 0.0;
        double value = 0.0;
        std::size_t evaluations = 0;
        std::vector<GridPoint> trace;
    };

    /// Derivative-free 1-D maximisation: a uniform grid of `samples` points
    /// over `range` (endpoints included) plus `extra_points` inside the range,
    /// then `refinement_passes` re-grids of `samples` points spanning one
    /// current grid step either side of the incumbent. Each distinct x is
    /// evaluated once. Ties go to the smallest x.
    GridSearchResult grid_search(Range range, int samples, int refinement_passes,
                                 std::span<const double> extra_points,
                                 const std::function<double(double)> &objective);

    /// Points of a uniform grid, exactly hitting both endpoints.
    std::vector<double> uniform_grid(Range range, int samples);
}
