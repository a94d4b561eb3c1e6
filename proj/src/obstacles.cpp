#include "gridclust/obstacles.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <queue>

namespace gridclust {

namespace {

void mark_bisect(Grid& grid, const Point& a, const Point& b, double resolution) {
    grid.cells[std::size_t(grid.cell_of(a))].obstructed = true;
    grid.cells[std::size_t(grid.cell_of(b))].obstructed = true;
    if (dist(a, b) <= resolution) return;
    const Point mid{(a.x + b.x) * 0.5, (a.y + b.y) * 0.5};
    grid.cells[std::size_t(grid.cell_of(mid))].obstructed = true;
    mark_bisect(grid, a, mid, resolution);
    mark_bisect(grid, mid, b, resolution);
}

}  // namespace

void mark_obstructed_cells(Grid& grid, const ObstacleSet& obstacles, ObstructedMarking mode,
                           double resolution) {
    for (CellStats& c : grid.cells) c.obstructed = false;
    if (obstacles.empty()) return;

    if (mode == ObstructedMarking::bisection) {
        if (resolution <= 0.0) resolution = std::min(grid.cell_width(), grid.cell_height());
        for (const Polygon& poly : obstacles.polygons) {
            for (std::size_t e = 0; e < poly.size(); ++e) {
                const Segment edge = poly.edge(e);
                // Endpoints outside the scene would be clamped to border
                // cells by cell_of; only mark what the grid really covers.
                if (grid.bounds.contains(edge.a) && grid.bounds.contains(edge.b)) {
                    mark_bisect(grid, edge.a, edge.b, resolution);
                }
            }
        }
        return;
    }

    const double cw = grid.cell_width();
    const double ch = grid.cell_height();
    for (const Polygon& poly : obstacles.polygons) {
        for (std::size_t e = 0; e < poly.size(); ++e) {
            const Segment edge = poly.edge(e);
            // Only cells overlapped by the edge's bbox can intersect it.
            const int c0 = std::clamp(
                int(std::floor((std::min(edge.a.x, edge.b.x) - grid.bounds.min.x) / cw)), 0,
                grid.w - 1);
            const int c1 = std::clamp(
                int(std::floor((std::max(edge.a.x, edge.b.x) - grid.bounds.min.x) / cw)), 0,
                grid.w - 1);
            const int y0 = std::clamp(
                int(std::floor((std::min(edge.a.y, edge.b.y) - grid.bounds.min.y) / ch)), 0,
                grid.w - 1);
            const int y1 = std::clamp(
                int(std::floor((std::max(edge.a.y, edge.b.y) - grid.bounds.min.y) / ch)), 0,
                grid.w - 1);
            for (int iy = y0; iy <= y1; ++iy) {
                const int row = grid.w - 1 - iy;
                for (int col = c0; col <= c1; ++col) {
                    const int id = grid.cell_id(row, col);
                    CellStats& cell = grid.cells[std::size_t(id)];
                    if (cell.obstructed) continue;
                    if (segment_intersects_rect(edge, grid.cell_rect(id))) cell.obstructed = true;
                }
            }
        }
    }
}

std::vector<SubCell> decompose_subcells(const Grid& grid, int cell_id,
                                        const ObstacleSet& obstacles, int piece_w,
                                        const PointSet& points) {
    const Rect cell = grid.cell_rect(cell_id);
    const int pw = std::max(1, piece_w);
    const double pcw = (cell.max.x - cell.min.x) / pw;
    const double pch = (cell.max.y - cell.min.y) / pw;

    auto piece_rect = [&](int id) {
        const int row = id / pw, col = id % pw;
        const int iy = pw - 1 - row;
        return Rect{{cell.min.x + col * pcw, cell.min.y + iy * pch},
                    {cell.min.x + (col + 1) * pcw, cell.min.y + (iy + 1) * pch}};
    };

    const int total = pw * pw;
    std::vector<bool> obstructed(std::size_t(total), false);
    for (int id = 0; id < total; ++id) {
        const Rect r = piece_rect(id);
        for (const Polygon& poly : obstacles.polygons) {
            bool hit = false;
            for (std::size_t e = 0; e < poly.size(); ++e) {
                if (segment_intersects_rect(poly.edge(e), r)) {
                    hit = true;
                    break;
                }
            }
            // A piece with no boundary crossing lies entirely on one side,
            // so its center decides strict containment.
            if (!hit && point_in_polygon(r.center(), poly) == Location::inside) hit = true;
            if (hit) {
                obstructed[std::size_t(id)] = true;
                break;
            }
        }
    }

    // 8-connected components of non-obstructed pieces.
    std::vector<int> component(std::size_t(total), -1);
    std::vector<SubCell> subcells;
    for (int start = 0; start < total; ++start) {
        if (obstructed[std::size_t(start)] || component[std::size_t(start)] >= 0) continue;
        const int comp = int(subcells.size());
        SubCell sc;
        sc.parent_cell = cell_id;
        sc.piece_w = pw;
        std::deque<int> queue{start};
        component[std::size_t(start)] = comp;
        while (!queue.empty()) {
            const int id = queue.front();
            queue.pop_front();
            sc.pieces.push_back(id);
            const int row = id / pw, col = id % pw;
            for (int dr = -1; dr <= 1; ++dr) {
                for (int dc = -1; dc <= 1; ++dc) {
                    if (dr == 0 && dc == 0) continue;
                    const int r = row + dr, c = col + dc;
                    if (r < 0 || r >= pw || c < 0 || c >= pw) continue;
                    const int nb = r * pw + c;
                    if (!obstructed[std::size_t(nb)] && component[std::size_t(nb)] < 0) {
                        component[std::size_t(nb)] = comp;
                        queue.push_back(nb);
                    }
                }
            }
        }
        std::sort(sc.pieces.begin(), sc.pieces.end());
        sc.area_fraction = double(sc.pieces.size()) / double(total);
        subcells.push_back(std::move(sc));
    }

    // Bin the parent cell's points into pieces; obstructed pieces keep none.
    for (int pid : grid.cells[std::size_t(cell_id)].members) {
        const Point& p = points[std::size_t(pid)];
        int col = std::clamp(int(std::floor((p.x - cell.min.x) / pcw)), 0, pw - 1);
        int iy = std::clamp(int(std::floor((p.y - cell.min.y) / pch)), 0, pw - 1);
        const int piece = (pw - 1 - iy) * pw + col;
        const int comp = component[std::size_t(piece)];
        if (comp >= 0) subcells[std::size_t(comp)].members.push_back(pid);
    }
    for (SubCell& sc : subcells) {
        sc.n = static_cast<long long>(sc.members.size());
        if (sc.n > 0) {
            double sx = 0.0, sy = 0.0;
            for (int pid : sc.members) {
                sx += points[std::size_t(pid)].x;
                sy += points[std::size_t(pid)].y;
            }
            sc.mean = {sx / double(sc.n), sy / double(sc.n)};
        }
    }
    // Components were discovered in ascending smallest-piece order already.
    return subcells;
}

void label_dense_subcell(SubCell& sc, double threshold) {
    sc.dense = threshold > 0.0 && double(sc.n) / threshold >= sc.area_fraction;
}

VisibilityGraph build_visibility_graph(const ObstacleSet& obstacles, const EdgeGridIndex* index) {
    VisibilityGraph vg;
    for (const Polygon& poly : obstacles.polygons) {
        vg.nodes.insert(vg.nodes.end(), poly.vertices().begin(), poly.vertices().end());
    }
    vg.adj.assign(vg.nodes.size(), {});
    std::unique_ptr<EdgeGridIndex> local;
    if (index == nullptr) {
        local = std::make_unique<EdgeGridIndex>(obstacles);
        index = local.get();
    }
    for (std::size_t i = 0; i < vg.nodes.size(); ++i) {
        for (std::size_t j = i + 1; j < vg.nodes.size(); ++j) {
            if (segment_blocked({vg.nodes[i], vg.nodes[j]}, obstacles, index)) continue;
            const double w = dist(vg.nodes[i], vg.nodes[j]);
            vg.adj[i].emplace_back(int(j), w);
            vg.adj[j].emplace_back(int(i), w);
            ++vg.edge_count;
        }
    }
    return vg;
}

ObstructedDistanceOracle::ObstructedDistanceOracle(const ObstacleSet& obstacles)
    : obstacles_(obstacles), index_(obstacles), graph_(build_visibility_graph(obstacles, &index_)) {}

std::vector<int> ObstructedDistanceOracle::visible_vertices(const Point& p) const {
    std::vector<int> out;
    for (std::size_t i = 0; i < graph_.nodes.size(); ++i) {
        if (!segment_blocked({p, graph_.nodes[i]}, obstacles_, &index_)) out.push_back(int(i));
    }
    return out;
}

double ObstructedDistanceOracle::distance(const Point& p, const Point& q) const {
    if (point_strictly_inside_any(p, obstacles_) || point_strictly_inside_any(q, obstacles_))
        throw EndpointInsideObstacle();
    if (!segment_blocked({p, q}, obstacles_, &index_)) return dist(p, q);

    // Dijkstra over VG' = VG + {p, q}, binary heap.
    const int nv = int(graph_.nodes.size());
    const int src = nv, dst = nv + 1;
    std::vector<double> best(std::size_t(nv) + 2, kNoPath);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;

    std::vector<std::pair<int, double>> src_edges;
    for (int v : visible_vertices(p)) src_edges.emplace_back(v, dist(p, graph_.nodes[std::size_t(v)]));
    std::vector<double> to_dst(std::size_t(nv), kNoPath);
    for (int v : visible_vertices(q)) to_dst[std::size_t(v)] = dist(q, graph_.nodes[std::size_t(v)]);

    best[std::size_t(src)] = 0.0;
    heap.emplace(0.0, src);
    while (!heap.empty()) {
        const auto [d, u] = heap.top();
        heap.pop();
        if (d > best[std::size_t(u)]) continue;
        if (u == dst) return d;
        if (u == src) {
            for (const auto& [v, w] : src_edges) {
                if (d + w < best[std::size_t(v)]) {
                    best[std::size_t(v)] = d + w;
                    heap.emplace(d + w, v);
                }
            }
            continue;
        }
        if (to_dst[std::size_t(u)] < kNoPath && d + to_dst[std::size_t(u)] < best[std::size_t(dst)]) {
            best[std::size_t(dst)] = d + to_dst[std::size_t(u)];
            heap.emplace(best[std::size_t(dst)], dst);
        }
        for (const auto& [v, w] : graph_.adj[std::size_t(u)]) {
            if (d + w < best[std::size_t(v)]) {
                best[std::size_t(v)] = d + w;
                heap.emplace(d + w, v);
            }
        }
    }
    return best[std::size_t(dst)];
}

}  // namespace gridclust
