#include "gridclust/engine.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace gridclust {

namespace {

int wcc_piece_w(long long n_cell) {
    const long long w = round_half_away(std::sqrt(double(n_cell) / 50.0));
    return int(std::clamp(w, 4LL, 64LL));
}

Rect unit_piece_rect(const Grid& grid, const Unit& u, std::size_t k) {
    const Rect cell = grid.cell_rect(u.cell);
    const int pw = u.piece_w;
    const double pcw = (cell.max.x - cell.min.x) / pw;
    const double pch = (cell.max.y - cell.min.y) / pw;
    const int id = u.pieces[k];
    const int row = id / pw, col = id % pw;
    const int iy = pw - 1 - row;
    return Rect{{cell.min.x + col * pcw, cell.min.y + iy * pch},
                {cell.min.x + (col + 1) * pcw, cell.min.y + (iy + 1) * pch}};
}

// Closed intersection of two touching rects: a degenerate rect (segment or
// point). Travel across the contact is possible iff some point of it is not
// strictly inside an obstacle; corners and center decide that.
bool contact_passable(const Rect& r1, const Rect& r2, const ObstacleSet& obstacles) {
    const Rect c{{std::max(r1.min.x, r2.min.x), std::max(r1.min.y, r2.min.y)},
                 {std::min(r1.max.x, r2.max.x), std::min(r1.max.y, r2.max.y)}};
    if (c.min.x > c.max.x || c.min.y > c.max.y) return false;
    if (obstacles.empty()) return true;
    const Point samples[5] = {c.min,
                              c.max,
                              {c.min.x, c.max.y},
                              {c.max.x, c.min.y},
                              c.center()};
    for (const Point& s : samples) {
        if (!point_strictly_inside_any(s, obstacles)) return true;
    }
    return false;
}

}  // namespace

UnitSet build_units(const Grid& grid, const PointSet& points, const ObstacleSet& obstacles,
                    SubcellSizing sizing, double subcell_threshold) {
    UnitSet set;
    set.by_cell.assign(grid.cells.size(), {});
    for (int cell = 0; cell < int(grid.cells.size()); ++cell) {
        const CellStats& stats = grid.cells[std::size_t(cell)];
        if (!stats.obstructed) {
            Unit u;
            u.is_cell = true;
            u.cell = cell;
            u.n = stats.n;
            u.mean = stats.mean;
            u.dense = stats.dense;
            u.members = stats.members;
            set.by_cell[std::size_t(cell)].push_back(int(set.units.size()));
            set.units.push_back(std::move(u));
            continue;
        }
        if (stats.n == 0) continue;
        const int pw = sizing == SubcellSizing::fixed_w ? grid.w : wcc_piece_w(stats.n);
        std::vector<SubCell> subs = decompose_subcells(grid, cell, obstacles, pw, points);
        for (std::size_t s = 0; s < subs.size(); ++s) {
            SubCell& sc = subs[s];
            label_dense_subcell(sc, subcell_threshold);
            Unit u;
            u.is_cell = false;
            u.cell = cell;
            u.sub = int(s);
            u.pieces = std::move(sc.pieces);
            u.piece_w = sc.piece_w;
            u.n = sc.n;
            u.mean = sc.mean;
            u.weight = sc.area_fraction;
            u.dense = sc.dense;
            u.members = std::move(sc.members);
            set.by_cell[std::size_t(cell)].push_back(int(set.units.size()));
            set.units.push_back(std::move(u));
        }
    }
    return set;
}

bool units_adjacent(const Grid& grid, const UnitSet& units, int a, int b,
                    const ObstacleSet& obstacles) {
    if (a == b) return false;
    const Unit& ua = units.units[std::size_t(a)];
    const Unit& ub = units.units[std::size_t(b)];
    if (ua.cell == ub.cell) return false;  // distinct sub-cells of one cell never touch
    const int dr = std::abs(grid.row_of(ua.cell) - grid.row_of(ub.cell));
    const int dc = std::abs(grid.col_of(ua.cell) - grid.col_of(ub.cell));
    if (dr > 1 || dc > 1) return false;

    if (ua.is_cell && ub.is_cell) {
        return contact_passable(grid.cell_rect(ua.cell), grid.cell_rect(ub.cell), obstacles);
    }

    // Restrict sub-cell footprints to pieces touching the other parent's rect.
    const Rect rb = grid.cell_rect(ub.cell);
    const Rect ra = grid.cell_rect(ua.cell);
    std::vector<Rect> fa, fb;
    if (ua.is_cell) {
        fa.push_back(ra);
    } else {
        for (std::size_t k = 0; k < ua.pieces.size(); ++k) {
            const Rect r = unit_piece_rect(grid, ua, k);
            if (r.touches(rb)) fa.push_back(r);
        }
    }
    if (ub.is_cell) {
        fb.push_back(rb);
    } else {
        for (std::size_t k = 0; k < ub.pieces.size(); ++k) {
            const Rect r = unit_piece_rect(grid, ub, k);
            if (r.touches(ra)) fb.push_back(r);
        }
    }
    for (const Rect& r1 : fa) {
        for (const Rect& r2 : fb) {
            if (contact_passable(r1, r2, obstacles)) return true;
        }
    }
    return false;
}

std::vector<Region> find_unit_regions(const Grid& grid, const UnitSet& units,
                                      const ObstacleSet& obstacles) {
    std::vector<Region> regions;
    std::vector<bool> seen(units.units.size(), false);
    for (std::size_t start = 0; start < units.units.size(); ++start) {
        if (seen[start] || !units.units[start].dense) continue;
        Region region;
        std::deque<int> queue{int(start)};
        seen[start] = true;
        while (!queue.empty()) {
            const int id = queue.front();
            queue.pop_front();
            const Unit& u = units.units[std::size_t(id)];
            region.unit_ids.push_back(id);
            region.point_count += u.n;
            region.t += u.weight;
            const int row = grid.row_of(u.cell), col = grid.col_of(u.cell);
            for (int dr = -1; dr <= 1; ++dr) {
                for (int dc = -1; dc <= 1; ++dc) {
                    if (dr == 0 && dc == 0) continue;
                    const int r = row + dr, c = col + dc;
                    if (r < 0 || r >= grid.w || c < 0 || c >= grid.w) continue;
                    for (int nb : units.by_cell[std::size_t(grid.cell_id(r, c))]) {
                        if (seen[std::size_t(nb)] || !units.units[std::size_t(nb)].dense) continue;
                        if (!units_adjacent(grid, units, id, nb, obstacles)) continue;
                        seen[std::size_t(nb)] = true;
                        queue.push_back(nb);
                    }
                }
            }
        }
        std::sort(region.unit_ids.begin(), region.unit_ids.end());
        regions.push_back(std::move(region));
    }
    return regions;
}

Point find_center_obstructed(const Cluster& cluster, const UnitSet& units,
                             const PointSet& points, const ObstacleSet& obstacles,
                             const ObstructedDistanceOracle& oracle) {
    double sx = 0.0, sy = 0.0;
    long long n = 0;
    for (int uid : cluster.unit_ids) {
        for (int pid : units.units[std::size_t(uid)].members) {
            sx += points[std::size_t(pid)].x;
            sy += points[std::size_t(pid)].y;
            ++n;
        }
    }
    if (n == 0) throw ComputeError("cluster has no points");
    const Point mean{sx / double(n), sy / double(n)};
    if (!point_strictly_inside_any(mean, obstacles)) return mean;

    // Obstructed-mean fallback: pick the member unit whose mean is cheapest to reach
    // from every other unit, weighted by point counts.
    double best_cost = kNoPath;
    int best_unit = -1;
    for (int uid : cluster.unit_ids) {
        const Unit& c = units.units[std::size_t(uid)];
        if (c.n == 0) continue;
        // A mean inside an obstacle (a free ring around a swallowed obstacle
        // can average there) is not a legal center candidate.
        if (point_strictly_inside_any(c.mean, obstacles)) continue;
        double cost = 0.0;
        for (int other : cluster.unit_ids) {
            if (other == uid) continue;
            const Unit& o = units.units[std::size_t(other)];
            if (o.n == 0 || point_strictly_inside_any(o.mean, obstacles)) continue;
            const double dp = oracle.distance(c.mean, o.mean);
            if (dp == kNoPath) {
                cost = kNoPath;
                break;
            }
            cost += double(o.n) * dp * dp;
        }
        if (cost < best_cost) {
            best_cost = cost;
            best_unit = uid;
        }
    }
    if (best_unit < 0) throw CenterUndefined();
    return units.units[std::size_t(best_unit)].mean;
}

void extend_clusters(const Grid& grid, const UnitSet& units, const ObstacleSet& obstacles,
                     const ObstructedDistanceOracle& oracle, double threshold,
                     std::vector<Cluster>& clusters, std::vector<int>& unit_to_cluster,
                     std::vector<int>& assignments) {
    const std::vector<Point> frozen_centers = [&] {
        std::vector<Point> c;
        c.reserve(clusters.size());
        for (const Cluster& cl : clusters) c.push_back(cl.center);
        return c;
    }();

    auto neighbor_clusters = [&](int uid) {
        std::vector<int> out;
        const Unit& u = units.units[std::size_t(uid)];
        const int row = grid.row_of(u.cell), col = grid.col_of(u.cell);
        for (int dr = -1; dr <= 1; ++dr) {
            for (int dc = -1; dc <= 1; ++dc) {
                if (dr == 0 && dc == 0) continue;
                const int r = row + dr, c = col + dc;
                if (r < 0 || r >= grid.w || c < 0 || c >= grid.w) continue;
                for (int nb : units.by_cell[std::size_t(grid.cell_id(r, c))]) {
                    const int cl = unit_to_cluster[std::size_t(nb)];
                    if (cl < 0) continue;
                    if (std::find(out.begin(), out.end(), cl) != out.end()) continue;
                    if (units_adjacent(grid, units, uid, nb, obstacles)) out.push_back(cl);
                }
            }
        }
        std::sort(out.begin(), out.end());
        return out;
    };

    // Candidates: non-empty, non-dense units next to a cluster, by descending count.
    std::vector<int> candidates;
    for (std::size_t uid = 0; uid < units.units.size(); ++uid) {
        const Unit& u = units.units[uid];
        if (u.dense || u.n == 0 || unit_to_cluster[uid] >= 0) continue;
        if (!neighbor_clusters(int(uid)).empty()) candidates.push_back(int(uid));
    }
    std::stable_sort(candidates.begin(), candidates.end(), [&](int a, int b) {
        const long long na = units.units[std::size_t(a)].n;
        const long long nb = units.units[std::size_t(b)].n;
        if (na != nb) return na > nb;
        return a < b;
    });

    for (int uid : candidates) {
        const Unit& u = units.units[std::size_t(uid)];
        // A mean inside an obstacle has no obstructed distance to anything.
        if (point_strictly_inside_any(u.mean, obstacles)) continue;
        int chosen = -1;
        double best = kNoPath;
        for (int cl : neighbor_clusters(uid)) {
            const Cluster& c = clusters[std::size_t(cl)];
            if (double(c.point_count + u.n) < threshold * (c.t + u.weight)) continue;
            const double dp = oracle.distance(frozen_centers[std::size_t(cl)], u.mean);
            if (dp < best) {
                best = dp;
                chosen = cl;
            }
        }
        if (chosen < 0 || best == kNoPath) continue;
        Cluster& c = clusters[std::size_t(chosen)];
        c.unit_ids.push_back(uid);
        c.point_count += u.n;
        c.t += u.weight;
        unit_to_cluster[std::size_t(uid)] = chosen;
        for (int pid : u.members) assignments[std::size_t(pid)] = chosen;
    }
    for (Cluster& c : clusters) std::sort(c.unit_ids.begin(), c.unit_ids.end());
}

ClusterResult run_unit_pipeline(const PointSet& points, Grid grid, const ObstacleSet& obstacles,
                                UnitSet units, const ObstructedDistanceOracle& oracle,
                                double extension_threshold, bool extend) {
    ClusterResult result;
    result.points = points;
    result.m = grid.cell_count();
    result.h = grid.config.h;
    result.d = grid.d;
    result.assignments.assign(points.size(), kNoise);

    std::vector<Region> regions = find_unit_regions(grid, units, obstacles);
    std::vector<int> unit_to_cluster(units.units.size(), -1);
    for (const Region& region : regions) {
        if (region.point_count == 0) continue;
        Cluster cluster;
        cluster.id = int(result.clusters.size());
        cluster.unit_ids = region.unit_ids;
        cluster.point_count = region.point_count;
        cluster.t = region.t;
        for (int uid : cluster.unit_ids) {
            unit_to_cluster[std::size_t(uid)] = cluster.id;
            for (int pid : units.units[std::size_t(uid)].members)
                result.assignments[std::size_t(pid)] = cluster.id;
        }
        result.clusters.push_back(std::move(cluster));
    }
    result.phase1_cluster_count = result.clusters.size();
    for (Cluster& c : result.clusters)
        c.center = find_center_obstructed(c, units, points, obstacles, oracle);

    if (extend) {
        std::vector<long long> before;
        for (const Cluster& c : result.clusters) before.push_back(c.point_count);
        extend_clusters(grid, units, obstacles, oracle, extension_threshold, result.clusters,
                        unit_to_cluster, result.assignments);
        for (std::size_t i = 0; i < result.clusters.size(); ++i) {
            if (result.clusters[i].point_count != before[i]) {
                result.clusters[i].center = find_center_obstructed(result.clusters[i], units,
                                                                   points, obstacles, oracle);
            }
        }
    }

    result.noise_count = 0;
    for (int a : result.assignments) {
        if (a == kNoise) ++result.noise_count;
    }
    result.grid = std::move(grid);
    result.units = std::move(units);
    return result;
}

}  // namespace gridclust
