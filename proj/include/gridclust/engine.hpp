#pragma once

#include <optional>
#include <vector>

#include "gridclust/obstacles.hpp"

namespace gridclust {

// A clustering unit: a whole non-obstructed cell, or one sub-cell of an
// obstructed cell. Obstructed cells never appear as units themselves.
struct Unit {
    bool is_cell = true;
    int cell = -1;  // parent cell id
    int sub = -1;   // sub-cell ordinal within the parent, -1 for cells
    std::vector<int> pieces;
    int piece_w = 0;
    long long n = 0;
    Point mean{};
    double weight = 1.0;  // 1 for cells, the area fraction for sub-cells
    bool dense = false;
    std::vector<int> members;
};

struct UnitSet {
    std::vector<Unit> units;
    std::vector<std::vector<int>> by_cell;  // unit ids housed in each cell
};

enum class SubcellSizing {
    fixed_w,      // CPO-WFC: the cell splits into w x w pieces like the scene
    point_target  // CPO-WCC: ~50 points per piece, clamped to [4x4, 64x64]
};

// Builds the unit set for a labeled grid. Obstructed non-empty cells are
// decomposed into sub-cells; sub-cell density uses subcell_threshold
// (d for CPO-WFC, t for CPO-WCC).
UnitSet build_units(const Grid& grid, const PointSet& points, const ObstacleSet& obstacles,
                    SubcellSizing sizing, double subcell_threshold);

// Obstacle-aware neighbor relation: footprints share an edge or corner and
// some point of the shared contact is not strictly inside an obstacle.
bool units_adjacent(const Grid& grid, const UnitSet& units, int a, int b,
                    const ObstacleSet& obstacles);

// Maximal connected regions of dense units, ordered by smallest member id.
// Region::unit_ids index into units.units here.
std::vector<Region> find_unit_regions(const Grid& grid, const UnitSet& units,
                                      const ObstacleSet& obstacles);

struct Cluster {
    int id = 0;
    std::vector<int> unit_ids;
    long long point_count = 0;
    double t = 0.0;  // unit count, sub-cells weighted by area fraction
    Point center{};
};

struct ClusterResult {
    PointSet points;
    std::vector<int> assignments;  // cluster id per point, kNoise for outliers
    std::vector<Cluster> clusters;
    Grid grid;
    UnitSet units;
    long long m = 0;
    double h = 0.0;
    long long d = 0;
    std::size_t phase1_cluster_count = 0;
    long long noise_count = 0;
};

// Mean of the cluster's points; if that lies strictly inside an obstacle,
// the mean of the member unit minimizing sum(n_i * d'(m_c, m_i)^2) instead.
Point find_center_obstructed(const Cluster& cluster, const UnitSet& units,
                             const PointSet& points, const ObstacleSet& obstacles,
                             const ObstructedDistanceOracle& oracle);

// Phase 2: single pass over non-empty non-dense units adjacent to clusters,
// descending by point count. A unit joins a neighboring cluster only if
// point_count + n >= threshold * (t + weight); ties on the nearest frozen
// center go to the lower cluster id. Mutates clusters, membership map and
// assignments in place.
void extend_clusters(const Grid& grid, const UnitSet& units, const ObstacleSet& obstacles,
                     const ObstructedDistanceOracle& oracle, double threshold,
                     std::vector<Cluster>& clusters, std::vector<int>& unit_to_cluster,
                     std::vector<int>& assignments);

// Full pipeline over an already labeled (dense/obstructed) grid.
ClusterResult run_unit_pipeline(const PointSet& points, Grid grid, const ObstacleSet& obstacles,
                                UnitSet units, const ObstructedDistanceOracle& oracle,
                                double extension_threshold, bool extend);

}  // namespace gridclust
