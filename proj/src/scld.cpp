#include "gridclust/scld.hpp"

#include <algorithm>
#include <cmath>

namespace gridclust {

namespace {

const ObstacleSet kNoObstacles{};

ClusterResult finish_scld(const PointSet& points, Grid grid) {
    label_dense(grid);
    const double d = double(grid.d);
    UnitSet units = build_units(grid, points, kNoObstacles, SubcellSizing::fixed_w, d);
    ObstructedDistanceOracle oracle(kNoObstacles);
    return run_unit_pipeline(points, std::move(grid), kNoObstacles, std::move(units), oracle, d,
                             /*extend=*/true);
}

}  // namespace

ClusterResult scld(const PointSet& points, const ScldParams& params) {
    GridConfig config{params.m, params.h, params.bounds};
    Grid grid = build_grid(points, config, /*require_square=*/true);
    return finish_scld(points, std::move(grid));
}

ClusterResult incremental_update(const ClusterResult& prev, const PointSet& added,
                                 const std::vector<int>& removed) {
    const std::size_t old_n = prev.points.size();
    std::vector<bool> drop(old_n, false);
    for (int id : removed) {
        if (id < 0 || std::size_t(id) >= old_n || drop[std::size_t(id)])
            throw ValidationError("unknown or duplicate point id in removal list");
        drop[std::size_t(id)] = true;
    }

    PointSet merged;
    merged.reserve(old_n - removed.size() + added.size());
    std::vector<int> remap(old_n, -1);
    for (std::size_t i = 0; i < old_n; ++i) {
        if (drop[i]) continue;
        remap[i] = int(merged.size());
        merged.push_back(prev.points[i]);
    }
    merged.insert(merged.end(), added.begin(), added.end());
    if (merged.empty()) throw ValidationError("update removes every point");

    const ScldParams params{prev.m, prev.h, prev.grid.config.bounds};

    // The grid extent is the tight bbox unless pinned in the config; when the
    // delta moves the bbox, every cell boundary moves with it.
    Rect new_bounds;
    if (params.bounds) {
        new_bounds = *params.bounds;
    } else {
        new_bounds = Rect{merged[0], merged[0]};
        for (const Point& p : merged) {
            new_bounds.min.x = std::min(new_bounds.min.x, p.x);
            new_bounds.min.y = std::min(new_bounds.min.y, p.y);
            new_bounds.max.x = std::max(new_bounds.max.x, p.x);
            new_bounds.max.y = std::max(new_bounds.max.y, p.y);
        }
        if (new_bounds.max.x - new_bounds.min.x <= 0.0) new_bounds.max.x = new_bounds.min.x + 1.0;
        if (new_bounds.max.y - new_bounds.min.y <= 0.0) new_bounds.max.y = new_bounds.min.y + 1.0;
        if (new_bounds.min != prev.grid.bounds.min || new_bounds.max != prev.grid.bounds.max)
            return scld(merged, params);
    }

    // Same extent: patch only the cells the delta touches.
    Grid grid;
    grid.config = prev.grid.config;
    grid.w = prev.grid.w;
    grid.bounds = prev.grid.bounds;
    grid.n_points = static_cast<long long>(merged.size());
    grid.d = round_half_away(double(grid.n_points) / double(params.m) * params.h);
    grid.cells.assign(prev.grid.cells.size(), {});

    std::vector<bool> touched(grid.cells.size(), false);
    for (int id : removed) touched[std::size_t(grid.cell_of(prev.points[std::size_t(id)]))] = true;
    for (const Point& p : added) touched[std::size_t(grid.cell_of(p))] = true;

    for (std::size_t c = 0; c < grid.cells.size(); ++c) {
        CellStats& cell = grid.cells[c];
        const CellStats& old = prev.grid.cells[c];
        if (!touched[c]) {
            cell.n = old.n;
            cell.mean = old.mean;
            cell.members.reserve(old.members.size());
            for (int id : old.members) cell.members.push_back(remap[std::size_t(id)]);
            continue;
        }
        for (int id : old.members) {
            if (remap[std::size_t(id)] >= 0) cell.members.push_back(remap[std::size_t(id)]);
        }
    }
    for (std::size_t i = 0; i < added.size(); ++i) {
        const int new_id = int(old_n - removed.size() + i);
        grid.cells[std::size_t(grid.cell_of(added[i]))].members.push_back(new_id);
    }
    for (std::size_t c = 0; c < grid.cells.size(); ++c) {
        if (!touched[c]) continue;
        CellStats& cell = grid.cells[c];
        std::sort(cell.members.begin(), cell.members.end());
        cell.n = static_cast<long long>(cell.members.size());
        if (cell.n > 0) {
            double sx = 0.0, sy = 0.0;
            for (int id : cell.members) {
                sx += merged[std::size_t(id)].x;
                sy += merged[std::size_t(id)].y;
            }
            cell.mean = {sx / double(cell.n), sy / double(cell.n)};
        }
    }
    return finish_scld(merged, std::move(grid));
}

}  // namespace gridclust
