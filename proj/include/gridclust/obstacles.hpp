#pragma once

#include <limits>
#include <memory>
#include <vector>

#include "gridclust/grid.hpp"

namespace gridclust {

inline constexpr double kNoPath = std::numeric_limits<double>::infinity();

enum class ObstructedMarking {
    exact,      // segment/rectangle intersection per boundary edge
    bisection,  // edge midpoint subdivision down to resolution e
};

// Flags cells whose rectangle is met by an obstacle boundary edge. In
// bisection mode, `resolution` defaults to the smaller cell side; the
// bisection marking is always a subset of the exact one.
void mark_obstructed_cells(Grid& grid, const ObstacleSet& obstacles,
                           ObstructedMarking mode = ObstructedMarking::exact,
                           double resolution = 0.0);

struct SubCell {
    int parent_cell = -1;
    std::vector<int> pieces;   // piece indices in the parent's piece grid, row-major from top
    int piece_w = 0;           // pieces per axis in the parent cell
    long long n = 0;           // points in the sub-cell
    Point mean{};              // undefined when n == 0
    double area_fraction = 0;  // share of the parent cell covered by this sub-cell
    bool dense = false;
    std::vector<int> members;  // point ids, ascending
};

// Splits an obstructed cell into a piece_w x piece_w piece grid and returns
// the maximal 8-connected components of non-obstructed pieces. Pieces cut by
// an obstacle boundary or lying strictly inside an obstacle are obstructed;
// points falling into obstructed pieces belong to no sub-cell.
std::vector<SubCell> decompose_subcells(const Grid& grid, int cell_id,
                                        const ObstacleSet& obstacles, int piece_w,
                                        const PointSet& points);

// A sub-cell is dense when n / threshold >= area_fraction. The threshold is
// d for CPO-WFC and t for CPO-WCC.
void label_dense_subcell(SubCell& sc, double threshold);

struct VisibilityGraph {
    std::vector<Point> nodes;  // all obstacle vertices
    std::vector<std::vector<std::pair<int, double>>> adj;
    std::size_t edge_count = 0;
};

VisibilityGraph build_visibility_graph(const ObstacleSet& obstacles,
                                       const EdgeGridIndex* index = nullptr);

// Answers d'(p, q): Euclidean when the direct segment is unblocked, otherwise
// the shortest path through the visibility graph augmented with p and q.
// Returns kNoPath when p and q are disconnected.
class ObstructedDistanceOracle {
public:
    explicit ObstructedDistanceOracle(const ObstacleSet& obstacles);

    double distance(const Point& p, const Point& q) const;
    const VisibilityGraph& graph() const { return graph_; }
    const ObstacleSet& obstacles() const { return obstacles_; }

private:
    std::vector<int> visible_vertices(const Point& p) const;

    const ObstacleSet& obstacles_;
    EdgeGridIndex index_;
    VisibilityGraph graph_;
};

}  // namespace gridclust
