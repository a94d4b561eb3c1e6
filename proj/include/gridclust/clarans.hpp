#pragma once

#include <cstdint>
#include <vector>

#include "gridclust/grid.hpp"

namespace gridclust {

struct ClaransParams {
    int k = 2;
    int numlocal = 2;
    // Neighbor tries per local search; <= 0 picks max(250, 1.25% * k * (N - k)).
    long long maxneighbor = 0;
    std::uint64_t seed = 0;
};

struct MedoidSolution {
    std::vector<int> medoids;      // point ids, ascending
    double cost = 0.0;             // sum of distances to the nearest medoid
    std::vector<int> assignments;  // nearest medoid's position in `medoids` per point
};

// Randomized k-medoid search: random restarts, random single-medoid swaps,
// strict-improvement acceptance, stop after maxneighbor consecutive failures.
MedoidSolution clarans(const PointSet& points, const ClaransParams& params);

// Sum of squared Euclidean distances to the nearest center.
double square_error(const PointSet& points, const std::vector<Point>& centers);

}  // namespace gridclust
