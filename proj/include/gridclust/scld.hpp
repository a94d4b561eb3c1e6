#pragma once

#include "gridclust/engine.hpp"

namespace gridclust {

struct ScldParams {
    long long m = 0;  // perfect square
    double h = 0.9;
    std::optional<Rect> bounds;
};

// Two-phase grid clustering: dense regions with centers, then assignment of
// qualifying non-dense cells and recentering.
ClusterResult scld(const PointSet& points, const ScldParams& params);

// Applies a point delta (removed ids drop out, added points append) and
// reclusters. Touched cells are rebuilt from their member lists; the result
// is exactly what scld() returns on the merged point set.
ClusterResult incremental_update(const ClusterResult& prev, const PointSet& added,
                                 const std::vector<int>& removed);

}  // namespace gridclust
