#include <random>
#include <set>

#include "doctest.h"
#include "gridclust/obstacles.hpp"
#include "oracles.hpp"
#include "worked_example.hpp"

using namespace gridclust;

namespace {

Grid river_grid(PointSet& pts) {
    pts = worked_example::points();
    Grid grid = build_grid(pts, {worked_example::kM, worked_example::kH, worked_example::kBounds});
    label_dense(grid);
    return grid;
}

}  // namespace

TEST_CASE("mark_obstructed_cells: none without obstacles") {
    PointSet pts;
    Grid grid = river_grid(pts);
    mark_obstructed_cells(grid, {});
    for (const CellStats& c : grid.cells) CHECK_FALSE(c.obstructed);
}

TEST_CASE("mark_obstructed_cells: the river hits cells 15, 21, 27 (1-based)") {
    PointSet pts;
    Grid grid = river_grid(pts);
    mark_obstructed_cells(grid, worked_example::river());
    std::vector<int> got;
    for (int id = 0; id < 36; ++id)
        if (grid.cells[std::size_t(id)].obstructed) got.push_back(id);
    CHECK(got == worked_example::kObstructed);
}

TEST_CASE("mark_obstructed_cells: bisection is a subset of exact and catches fat crossings") {
    std::mt19937_64 rng(21);
    for (int scene = 0; scene < 40; ++scene) {
        const ObstacleSet obs = oracle::random_obstacles(rng, 4, 10.0);
        PointSet pts{{0.0, 0.0}, {10.0, 10.0}};
        Grid exact = build_grid(pts, {64, 0.9, Rect{{0, 0}, {10, 10}}});
        Grid coarse = exact;
        Grid fine = exact;
        const double side = std::min(exact.cell_width(), exact.cell_height());
        const double e = side / 8.0;
        mark_obstructed_cells(exact, obs, ObstructedMarking::exact);
        mark_obstructed_cells(coarse, obs, ObstructedMarking::bisection, 0.5);
        mark_obstructed_cells(fine, obs, ObstructedMarking::bisection, e);
        for (std::size_t i = 0; i < exact.cells.size(); ++i) {
            if (coarse.cells[i].obstructed) CHECK(exact.cells[i].obstructed);
            if (fine.cells[i].obstructed) CHECK(exact.cells[i].obstructed);
        }
        // Any edge that penetrates a cell by 2e must leave a sample there:
        // sampling can only miss crossings thinner than the resolution.
        for (int id = 0; id < 64; ++id) {
            const Rect r = exact.cell_rect(id);
            if (r.max.x - r.min.x <= 4 * e || r.max.y - r.min.y <= 4 * e) continue;
            const Rect shrunk{{r.min.x + 2 * e, r.min.y + 2 * e},
                              {r.max.x - 2 * e, r.max.y - 2 * e}};
            bool fat = false;
            for (const Polygon& poly : obs.polygons)
                for (std::size_t ei = 0; ei < poly.size() && !fat; ++ei)
                    if (segment_intersects_rect(poly.edge(ei), shrunk)) fat = true;
            if (fat) CHECK(fine.cells[std::size_t(id)].obstructed);
        }
    }
}

TEST_CASE("decompose_subcells: river cell 15 gives one half-cell with 300 points") {
    PointSet pts;
    Grid grid = river_grid(pts);
    const ObstacleSet river = worked_example::river();
    mark_obstructed_cells(grid, river);
    const auto subs = decompose_subcells(grid, 14, river, grid.w, pts);
    REQUIRE(subs.size() == 1);
    CHECK(subs[0].parent_cell == 14);
    CHECK(subs[0].n == 300);
    CHECK(subs[0].area_fraction == doctest::Approx(0.5));
    CHECK(subs[0].pieces.size() == 18);  // 3 of 6 piece columns survive
    CHECK(static_cast<long long>(subs[0].members.size()) == subs[0].n);
}

TEST_CASE("decompose_subcells: degenerate cells") {
    PointSet pts{{0.25, 0.25}, {1.75, 1.75}};
    Grid grid = build_grid(pts, {4, 0.9, Rect{{0, 0}, {2, 2}}});

    // A non-obstructed cell forced through the op: one sub-cell covering it.
    const auto whole = decompose_subcells(grid, 2, {}, 4, pts);
    REQUIRE(whole.size() == 1);
    CHECK(whole[0].area_fraction == doctest::Approx(1.0));
    CHECK(whole[0].pieces.size() == 16);
    CHECK(whole[0].n == 1);

    // A cell swallowed whole by an obstacle: nothing survives.
    ObstacleSet big;
    big.polygons.push_back(Polygon({{-1, -1}, {3, -1}, {3, 3}, {-1, 3}}));
    const auto none = decompose_subcells(grid, 2, big, 4, pts);
    CHECK(none.empty());
}

TEST_CASE("decompose_subcells: pieces partition the cell") {
    std::mt19937_64 rng(22);
    for (int scene = 0; scene < 40; ++scene) {
        const ObstacleSet obs = oracle::random_obstacles(rng, 3, 4.0);
        PointSet pts;
        std::uniform_real_distribution<double> u(0, 4);
        for (int i = 0; i < 400; ++i) {
            Point p{u(rng), u(rng)};
            if (!point_strictly_inside_any(p, obs)) pts.push_back(p);
        }
        Grid grid = build_grid(pts, {16, 0.9, Rect{{0, 0}, {4, 4}}});
        mark_obstructed_cells(grid, obs);
        for (int id = 0; id < 16; ++id) {
            if (!grid.cells[std::size_t(id)].obstructed) continue;
            const int pw = 8;
            const auto subs = decompose_subcells(grid, id, obs, pw, pts);
            std::set<int> used;
            double fraction = 0.0;
            for (const SubCell& sc : subs) {
                CHECK(!sc.pieces.empty());
                CHECK(sc.piece_w == pw);
                CHECK(sc.area_fraction > 0.0);
                CHECK(sc.area_fraction <= 1.0);
                fraction += sc.area_fraction;
                for (int piece : sc.pieces) CHECK(used.insert(piece).second);
            }
            CHECK(fraction <= 1.0 + 1e-12);
            CHECK(int(used.size()) <= pw * pw);
            // Every surviving point of the cell lands in exactly one sub-cell.
            long long in_subs = 0;
            for (const SubCell& sc : subs) in_subs += sc.n;
            CHECK(in_subs <= grid.cells[std::size_t(id)].n);
        }
    }
}

TEST_CASE("label_dense_subcell: ratio rule") {
    SubCell sc;
    sc.n = 300;
    sc.area_fraction = 0.5;
    label_dense_subcell(sc, 125.0);
    CHECK(sc.dense);  // 2.4 >= 0.5

    sc.n = 125;
    sc.area_fraction = 0.25;
    label_dense_subcell(sc, 200.0);
    CHECK(sc.dense);  // 0.625 >= 0.25

    sc.n = 0;
    sc.area_fraction = 0.01;
    label_dense_subcell(sc, 125.0);
    CHECK_FALSE(sc.dense);

    sc.n = 10;
    sc.area_fraction = 0.5;
    label_dense_subcell(sc, 100.0);
    CHECK_FALSE(sc.dense);  // 0.1 < 0.5
}

TEST_CASE("build_visibility_graph: one square keeps only its boundary") {
    ObstacleSet sq;
    sq.polygons.push_back(Polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}));
    const VisibilityGraph vg = build_visibility_graph(sq);
    CHECK(vg.nodes.size() == 4);
    CHECK(vg.edge_count == 4);  // both diagonals cross the interior
}

TEST_CASE("build_visibility_graph: separated obstacles see each other") {
    ObstacleSet obs;
    obs.polygons.push_back(Polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}));
    obs.polygons.push_back(Polygon({{5, 0}, {6, 0}, {6, 1}, {5, 1}}));
    const VisibilityGraph vg = build_visibility_graph(obs);
    bool cross = false;
    for (int u = 0; u < 4 && !cross; ++u)
        for (const auto& [v, wgt] : vg.adj[std::size_t(u)])
            if (v >= 4) cross = true;
    CHECK(cross);
}

TEST_CASE("build_visibility_graph: accelerated equals brute force") {
    std::mt19937_64 rng(23);
    for (int scene = 0; scene < 40; ++scene) {
        const ObstacleSet obs = oracle::random_obstacles(rng, 5, 10.0);
        const EdgeGridIndex index(obs);
        const VisibilityGraph fast = build_visibility_graph(obs, &index);
        const VisibilityGraph slow = build_visibility_graph(obs, nullptr);
        REQUIRE(fast.nodes.size() == slow.nodes.size());
        CHECK(fast.edge_count == slow.edge_count);
        for (std::size_t i = 0; i < fast.nodes.size(); ++i) {
            auto key = [](std::vector<std::pair<int, double>> a) {
                std::sort(a.begin(), a.end());
                return a;
            };
            CHECK(key(fast.adj[i]) == key(slow.adj[i]));
        }
        // Edge membership also matches a direct segment_blocked scan.
        for (std::size_t u = 0; u < slow.nodes.size(); ++u) {
            std::set<int> present;
            for (const auto& [v, wgt] : slow.adj[u]) present.insert(v);
            for (std::size_t v = 0; v < slow.nodes.size(); ++v) {
                if (v == u) continue;
                const bool visible =
                    !segment_blocked({slow.nodes[u], slow.nodes[v]}, obs);
                CHECK(visible == (present.count(int(v)) > 0));
            }
        }
    }
}

TEST_CASE("obstructed_distance: no obstacles means Euclidean") {
    const ObstacleSet none;
    const ObstructedDistanceOracle oracle_(none);
    CHECK(oracle_.distance({0, 0}, {3, 4}) == doctest::Approx(5.0));
    CHECK(oracle_.distance({2, 2}, {2, 2}) == doctest::Approx(0.0));
}

TEST_CASE("obstructed_distance: detour around a thin wall") {
    ObstacleSet wall;
    wall.polygons.push_back(Polygon({{1.9, 0}, {2.1, 0}, {2.1, 2}, {1.9, 2}}));
    const ObstructedDistanceOracle oracle_(wall);
    const Point p{0, 1}, q{4, 1};
    // All simple detours bend at the wall's four corners; the best either
    // rounds the top (via both top corners) or the bottom.
    auto leg = [](Point a, Point b) { return dist(a, b); };
    const double over_top = leg(p, {1.9, 2}) + leg({1.9, 2}, {2.1, 2}) + leg({2.1, 2}, q);
    const double under = leg(p, {1.9, 0}) + leg({1.9, 0}, {2.1, 0}) + leg({2.1, 0}, q);
    const double want = std::min(over_top, under);
    CHECK(oracle_.distance(p, q) == doctest::Approx(want).epsilon(1e-12));
    CHECK(oracle_.distance(q, p) == doctest::Approx(oracle_.distance(p, q)).epsilon(1e-12));
    CHECK(oracle_.distance(p, q) > dist(p, q));
}

TEST_CASE("obstructed_distance: endpoint inside an obstacle is an error") {
    ObstacleSet sq;
    sq.polygons.push_back(Polygon({{0, 0}, {2, 0}, {2, 2}, {0, 2}}));
    const ObstructedDistanceOracle oracle_(sq);
    CHECK_THROWS_AS(oracle_.distance({1, 1}, {5, 5}), EndpointInsideObstacle);
}

TEST_CASE("obstructed_distance: randomized against Bellman-Ford on the full graph") {
    std::mt19937_64 rng(24);
    int scenes = 0;
    while (scenes < 60) {
        const ObstacleSet obs = oracle::random_obstacles(rng, 4, 10.0);
        const ObstructedDistanceOracle oracle_(obs);
        ++scenes;
        int queries = 0;
        std::uniform_real_distribution<double> u(0, 10);
        while (queries < 10) {
            const Point p{u(rng), u(rng)}, q{u(rng), u(rng)};
            if (point_strictly_inside_any(p, obs) || point_strictly_inside_any(q, obs)) continue;
            ++queries;
            const double got = oracle_.distance(p, q);
            const double want = oracle::brute_obstructed_distance(p, q, obs);
            CHECK(got == doctest::Approx(want).epsilon(1e-9));
            CHECK(got >= dist(p, q) - 1e-12);
            CHECK(oracle_.distance(q, p) == doctest::Approx(got).epsilon(1e-12));
        }
    }
}

TEST_CASE("obstructed_distance: triangle inequality on random triples") {
    std::mt19937_64 rng(25);
    const ObstacleSet obs = oracle::random_obstacles(rng, 4, 10.0);
    const ObstructedDistanceOracle oracle_(obs);
    std::uniform_real_distribution<double> u(0, 10);
    int done = 0;
    while (done < 200) {
        const Point a{u(rng), u(rng)}, b{u(rng), u(rng)}, c{u(rng), u(rng)};
        if (point_strictly_inside_any(a, obs) || point_strictly_inside_any(b, obs) ||
            point_strictly_inside_any(c, obs))
            continue;
        ++done;
        const double ab = oracle_.distance(a, b);
        const double bc = oracle_.distance(b, c);
        const double ac = oracle_.distance(a, c);
        CHECK(ac <= ab + bc + 1e-9);
    }
}
