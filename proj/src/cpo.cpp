#include "gridclust/cpo.hpp"

#include <algorithm>
#include <cmath>

namespace gridclust {

AutoGrid auto_grid(const PointSet& points, std::optional<Rect> bounds) {
    if (points.empty()) throw ValidationError("empty point set");
    const long long n = static_cast<long long>(points.size());
    long long w = round_half_away(std::sqrt(double(n) / 200.0));
    const long long w_max = std::max(1LL, static_cast<long long>(std::floor(std::sqrt(double(n)))));
    w = std::clamp(w, std::min(2LL, w_max), w_max);

    AutoGrid out;
    GridConfig config{w * w, 1.0, bounds};
    out.grid = build_grid(points, config, /*require_square=*/true);
    out.t = double(n) / double(w * w);
    return out;
}

ObstructedClusterResult cpo_wcc(const PointSet& points, const ObstacleSet& obstacles,
                                std::optional<Rect> bounds) {
    AutoGrid ag = auto_grid(points, bounds);
    Grid grid = std::move(ag.grid);
    label_dense(grid, ag.t);
    mark_obstructed_cells(grid, obstacles);
    UnitSet units = build_units(grid, points, obstacles, SubcellSizing::point_target, ag.t);
    ObstructedDistanceOracle oracle(obstacles);
    return run_unit_pipeline(points, std::move(grid), obstacles, std::move(units), oracle, ag.t,
                             /*extend=*/false);
}

ObstructedClusterResult cpo_wfc(const PointSet& points, const ObstacleSet& obstacles,
                                const CpoWfcParams& params) {
    GridConfig config{params.m, params.h, params.bounds};
    Grid grid = build_grid(points, config, /*require_square=*/true);
    label_dense(grid);
    mark_obstructed_cells(grid, obstacles);
    const double d = double(grid.d);
    UnitSet units = build_units(grid, points, obstacles, SubcellSizing::fixed_w, d);
    ObstructedDistanceOracle oracle(obstacles);
    return run_unit_pipeline(points, std::move(grid), obstacles, std::move(units), oracle, d,
                             /*extend=*/true);
}

}  // namespace gridclust
