#pragma once

#include "gridclust/engine.hpp"
#include "gridclust/scld.hpp"

namespace gridclust {

using CpoWfcParams = ScldParams;
using ObstructedClusterResult = ClusterResult;

struct AutoGrid {
    Grid grid;
    double t = 0.0;  // mean points per cell, the CPO-WCC density threshold
};

// Picks an equal per-axis subdivision so cells keep the scene's aspect ratio,
// targeting ~200 points per cell with the cell count clamped to [4, N].
AutoGrid auto_grid(const PointSet& points, std::optional<Rect> bounds = std::nullopt);

// Algorithm with a computed cell count: auto grid, density threshold t,
// sub-cell decomposition sized by point counts, no phase-2 extension.
ObstructedClusterResult cpo_wcc(const PointSet& points, const ObstacleSet& obstacles,
                                std::optional<Rect> bounds = std::nullopt);

// Fixed-cell-count variant: SCLD's two phases with obstructed cells replaced
// by their sub-cells and obstructed distances in phase 2.
ObstructedClusterResult cpo_wfc(const PointSet& points, const ObstacleSet& obstacles,
                                const CpoWfcParams& params);

}  // namespace gridclust
