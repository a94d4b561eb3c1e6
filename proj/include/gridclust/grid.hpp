#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "gridclust/geometry.hpp"

namespace gridclust {

using PointSet = std::vector<Point>;

inline constexpr int kNoise = -1;

// round(x) with halves away from zero.
long long round_half_away(double x);

struct GridConfig {
    long long m = 0;             // total cell count, perfect square when required
    double h = 1.0;              // density proportion in (0, 1]
    std::optional<Rect> bounds;  // scene extent; tight bbox of the points when unset
};

struct CellStats {
    long long n = 0;
    Point mean{};  // undefined when n == 0
    bool dense = false;
    bool obstructed = false;
    std::vector<int> members;  // point ids, ascending
};

// w x w rectangular grid. Cells are numbered row-major from the top-left
// (left to right, top to bottom), matching the usual sketch orientation.
struct Grid {
    GridConfig config;
    int w = 0;
    long long n_points = 0;
    long long d = 0;  // dense threshold, round(N/m * h)
    Rect bounds{};
    std::vector<CellStats> cells;

    double cell_width() const { return (bounds.max.x - bounds.min.x) / w; }
    double cell_height() const { return (bounds.max.y - bounds.min.y) / w; }

    long long cell_count() const { return static_cast<long long>(w) * w; }
    int cell_id(int row, int col) const { return row * w + col; }
    int row_of(int id) const { return id / w; }
    int col_of(int id) const { return id % w; }

    // Cell containing p. Half-open cells: a point on a shared x boundary goes
    // to the right cell, on a shared y boundary to the upper cell; the scene's
    // outer boundary is closed.
    int cell_of(const Point& p) const;
    Rect cell_rect(int id) const;
    std::vector<int> neighbors(int id) const;  // 8-connectivity
};

Grid build_grid(const PointSet& points, const GridConfig& config, bool require_square = true);

// Relabel density from grid.d (or an explicit threshold; CPO-WCC uses t).
void label_dense(Grid& grid);
void label_dense(Grid& grid, double threshold);

struct Region {
    std::vector<int> unit_ids;  // cell ids here; generic unit ids in the CPO pipeline
    long long point_count = 0;
    double t = 0.0;  // number of units (area-weighted once sub-cells exist)
};

// Maximal 8-connected components of dense cells, ordered by smallest member id.
std::vector<Region> find_dense_regions(const Grid& grid);

Point region_mean(const PointSet& points, const Grid& grid, const Region& region);

}  // namespace gridclust
