#include "gridclust/grid.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace gridclust {

long long round_half_away(double x) { return std::llround(x); }

int Grid::cell_of(const Point& p) const {
    const double cw = cell_width();
    const double ch = cell_height();
    int col = static_cast<int>(std::floor((p.x - bounds.min.x) / cw));
    int iy = static_cast<int>(std::floor((p.y - bounds.min.y) / ch));
    col = std::clamp(col, 0, w - 1);
    iy = std::clamp(iy, 0, w - 1);
    const int row = w - 1 - iy;  // row 0 is the top band
    return cell_id(row, col);
}

Rect Grid::cell_rect(int id) const {
    const int row = row_of(id);
    const int col = col_of(id);
    const double cw = cell_width();
    const double ch = cell_height();
    const int iy = w - 1 - row;
    return Rect{{bounds.min.x + col * cw, bounds.min.y + iy * ch},
                {bounds.min.x + (col + 1) * cw, bounds.min.y + (iy + 1) * ch}};
}

std::vector<int> Grid::neighbors(int id) const {
    std::vector<int> out;
    const int row = row_of(id);
    const int col = col_of(id);
    for (int dr = -1; dr <= 1; ++dr) {
        for (int dc = -1; dc <= 1; ++dc) {
            if (dr == 0 && dc == 0) continue;
            const int r = row + dr, c = col + dc;
            if (r < 0 || r >= w || c < 0 || c >= w) continue;
            out.push_back(cell_id(r, c));
        }
    }
    return out;
}

Grid build_grid(const PointSet& points, const GridConfig& config, bool require_square) {
    if (points.empty()) throw ValidationError("empty point set");
    if (config.m < 1) throw ValidationError("cell count m must be >= 1");
    if (!(config.h > 0.0 && config.h <= 1.0)) throw ValidationError("h must be in (0, 1]");
    const long long w_ll = round_half_away(std::sqrt(double(config.m)));
    if (require_square && w_ll * w_ll != config.m)
        throw ValidationError("m must be a perfect square");

    Grid grid;
    grid.config = config;
    grid.w = static_cast<int>(w_ll);
    grid.n_points = static_cast<long long>(points.size());

    if (config.bounds) {
        grid.bounds = *config.bounds;
    } else {
        grid.bounds = Rect{points[0], points[0]};
        for (const Point& p : points) {
            grid.bounds.min.x = std::min(grid.bounds.min.x, p.x);
            grid.bounds.min.y = std::min(grid.bounds.min.y, p.y);
            grid.bounds.max.x = std::max(grid.bounds.max.x, p.x);
            grid.bounds.max.y = std::max(grid.bounds.max.y, p.y);
        }
        // Degenerate extents still need a positive-area grid.
        if (grid.bounds.max.x - grid.bounds.min.x <= 0.0) grid.bounds.max.x = grid.bounds.min.x + 1.0;
        if (grid.bounds.max.y - grid.bounds.min.y <= 0.0) grid.bounds.max.y = grid.bounds.min.y + 1.0;
    }
    if (!(grid.bounds.min.x < grid.bounds.max.x && grid.bounds.min.y < grid.bounds.max.y))
        throw ValidationError("grid bounds are degenerate");

    grid.cells.assign(std::size_t(grid.cell_count()), {});
    for (std::size_t i = 0; i < points.size(); ++i) {
        grid.cells[std::size_t(grid.cell_of(points[i]))].members.push_back(int(i));
    }
    for (CellStats& c : grid.cells) {
        c.n = static_cast<long long>(c.members.size());
        if (c.n > 0) {
            double sx = 0.0, sy = 0.0;
            for (int id : c.members) {
                sx += points[std::size_t(id)].x;
                sy += points[std::size_t(id)].y;
            }
            c.mean = {sx / double(c.n), sy / double(c.n)};
        }
    }
    grid.d = round_half_away(double(grid.n_points) / double(config.m) * config.h);
    return grid;
}

void label_dense(Grid& grid) {
    for (CellStats& c : grid.cells) c.dense = c.n >= grid.d;
}

void label_dense(Grid& grid, double threshold) {
    for (CellStats& c : grid.cells) c.dense = double(c.n) >= threshold;
}

std::vector<Region> find_dense_regions(const Grid& grid) {
    std::vector<Region> regions;
    std::vector<bool> seen(grid.cells.size(), false);
    for (std::size_t start = 0; start < grid.cells.size(); ++start) {
        if (seen[start] || !grid.cells[start].dense) continue;
        Region region;
        std::deque<int> queue{int(start)};
        seen[start] = true;
        while (!queue.empty()) {
            const int id = queue.front();
            queue.pop_front();
            region.unit_ids.push_back(id);
            region.point_count += grid.cells[std::size_t(id)].n;
            for (int nb : grid.neighbors(id)) {
                if (!seen[std::size_t(nb)] && grid.cells[std::size_t(nb)].dense) {
                    seen[std::size_t(nb)] = true;
                    queue.push_back(nb);
                }
            }
        }
        std::sort(region.unit_ids.begin(), region.unit_ids.end());
        region.t = double(region.unit_ids.size());
        regions.push_back(std::move(region));
    }
    // BFS starts scan in ascending id order, so regions already come out
    // ordered by smallest member id.
    return regions;
}

Point region_mean(const PointSet& points, const Grid& grid, const Region& region) {
    double sx = 0.0, sy = 0.0;
    long long n = 0;
    for (int cell : region.unit_ids) {
        for (int id : grid.cells[std::size_t(cell)].members) {
            sx += points[std::size_t(id)].x;
            sy += points[std::size_t(id)].y;
            ++n;
        }
    }
    if (n == 0) throw ComputeError("region has no points");
    return {sx / double(n), sy / double(n)};
}

}  // namespace gridclust
