#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gridclust/engine.hpp"

namespace gridclust {

// Text points file: one "x,y" per line, '#' starts a comment line.
// Line order defines point ids.
PointSet load_points(const std::string& path);
void save_points(const PointSet& points, const std::string& path);

// Obstacles file: JSON list of objects, each with a "vertices" list of [x,y]
// pairs. Polygons are validated, normalized to CCW and checked for
// pairwise disjointness.
ObstacleSet load_obstacles(const std::string& path);
void save_obstacles(const ObstacleSet& obstacles, const std::string& path);

std::vector<int> load_assignments(const std::string& path);

struct RunTimings {
    double build_seconds = 0.0;
    double cluster_seconds = 0.0;
    double center_seconds = 0.0;
    double total_seconds = 0.0;
};

// Writes assignments.csv ("point_index,cluster_id", noise as -1) and
// manifest.json into `dir`.
void save_result(const ClusterResult& result, const std::string& algorithm,
                 const RunTimings& timings, std::uint64_t points_digest,
                 std::uint64_t obstacles_digest, const std::string& dir);

// FNV-1a over the file bytes; stable input identity for manifests.
std::uint64_t digest_file(const std::string& path);

struct RenderOptions {
    double width = 800.0;
    std::optional<long long> grid_m;  // draw grid lines for a sqrt(m) x sqrt(m) grid
};

// One dot per point colored by cluster id (noise gray), filled obstacle
// polygons, optional grid lines. Valid SVG 1.1.
void render_svg(const PointSet& points, const std::vector<int>* assignments,
                const ObstacleSet* obstacles, const std::string& path,
                const RenderOptions& options = {});

}  // namespace gridclust
