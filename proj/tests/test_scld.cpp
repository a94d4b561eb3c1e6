#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "doctest.h"
#include "gridclust/scld.hpp"
#include "gridclust/synth.hpp"

using namespace gridclust;

namespace {

PointSet blob_scene(std::uint64_t seed, long long n, double noise) {
    SceneSpec spec;
    spec.preset = ScenePreset::ds2_blobs;
    spec.n = n;
    spec.noise_fraction = noise;
    spec.seed = seed;
    return generate(spec).points;
}

void check_result_invariants(const ClusterResult& r) {
    REQUIRE(r.assignments.size() == r.points.size());
    std::vector<long long> counts(r.clusters.size(), 0);
    long long noise = 0;
    for (int a : r.assignments) {
        if (a == kNoise) {
            ++noise;
        } else {
            REQUIRE(a >= 0);
            REQUIRE(std::size_t(a) < r.clusters.size());
            ++counts[std::size_t(a)];
        }
    }
    CHECK(noise == r.noise_count);
    long long sum = noise;
    for (std::size_t c = 0; c < r.clusters.size(); ++c) {
        CHECK(r.clusters[c].id == int(c));
        CHECK(r.clusters[c].point_count == counts[c]);
        sum += counts[c];
        // The cluster density bound (point_count >= d * t) holds after extension too.
        CHECK(double(r.clusters[c].point_count) >= double(r.d) * r.clusters[c].t - 1e-9);
    }
    CHECK(sum == static_cast<long long>(r.points.size()));
}

}  // namespace

TEST_CASE("scld: everything in one cell is one cluster centered at the mean") {
    PointSet pts;
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(4.1, 4.4);
    double sx = 0, sy = 0;
    for (int i = 0; i < 200; ++i) {
        pts.push_back({u(rng), u(rng)});
        sx += pts.back().x;
        sy += pts.back().y;
    }
    const ClusterResult r = scld(pts, {9, 0.9, Rect{{0, 0}, {9, 9}}});
    check_result_invariants(r);
    REQUIRE(r.clusters.size() == 1);
    CHECK(r.noise_count == 0);
    CHECK(r.clusters[0].center.x == doctest::Approx(sx / 200));
    CHECK(r.clusters[0].center.y == doctest::Approx(sy / 200));
}

TEST_CASE("scld: one point per cell with h=0.9 makes every cell dense") {
    PointSet pts;
    for (int row = 0; row < 4; ++row)
        for (int col = 0; col < 4; ++col) pts.push_back({col + 0.5, row + 0.5});
    const ClusterResult r = scld(pts, {16, 0.9, Rect{{0, 0}, {4, 4}}});
    check_result_invariants(r);
    CHECK(r.d == 1);
    REQUIRE(r.clusters.size() == 1);  // all dense, all connected
    CHECK(r.noise_count == 0);
    CHECK(r.clusters[0].point_count == 16);
}

TEST_CASE("scld: phase-2 arithmetic, a 120-point cell joins the nearest qualifying cluster") {
    // 6x6 grid over [0,6]^2 with N=5000 so d=125. Two clusters flank a
    // 120-point cell; both qualify; the nearer (by phase-1 center) wins.
    PointSet pts;
    std::mt19937_64 rng(32);
    auto fill = [&](int col, int row_from_top, int count, double pad = 0.05) {
        std::uniform_real_distribution<double> u(pad, 1.0 - pad);
        for (int i = 0; i < count; ++i)
            pts.push_back({col + u(rng), (5 - row_from_top) + u(rng)});
    };
    // Left cluster: cells (row 2, cols 0,1); right cluster: (row 2, cols 4,5).
    fill(0, 2, 1000);
    fill(1, 2, 1005);
    fill(4, 2, 700);
    fill(5, 2, 700);
    fill(2, 2, 120);  // candidate between the clusters, nearer the left center
    fill(3, 2, 115);  // second candidate, nearer the right center
    // 1360 filler points spread under d=125 across the two bottom rows
    // (rows 4 and 5), which touch none of the action cells in row 2.
    const int remaining = 5000 - 1000 - 1005 - 700 - 700 - 120 - 115;
    for (int i = 0; i < remaining; ++i) fill(i % 6, 4 + (i / 6) % 2, 1);

    const ClusterResult r = scld(pts, {36, 0.9, Rect{{0, 0}, {6, 6}}});
    check_result_invariants(r);
    CHECK(r.d == 125);
    REQUIRE(r.phase1_cluster_count >= 2);

    // Find the clusters holding the flanking cells.
    const Grid& g = r.grid;
    auto cluster_of_cell = [&](int cell) -> int {
        for (int pid : g.cells[std::size_t(cell)].members) return r.assignments[std::size_t(pid)];
        return kNoise;
    };
    const int left = cluster_of_cell(g.cell_id(2, 1));
    const int right = cluster_of_cell(g.cell_id(2, 4));
    REQUIRE(left != kNoise);
    REQUIRE(right != kNoise);
    CHECK(left != right);
    // 120-point cell at (2,2): 1000+1005+120 >= 125*3 qualifies; left center
    // (~x=1.0) is nearer than the right one (~x=4.5).
    CHECK(cluster_of_cell(g.cell_id(2, 2)) == left);
    CHECK(cluster_of_cell(g.cell_id(2, 3)) == right);
}

TEST_CASE("scld: rejection when the extension density bound fails") {
    // 3x3 grid over [0,3]^2 with N=45 so d = round(4.5) = 5. A 9-point dense
    // cell with a lone 1-point neighbor sits opposite a 35-point cell that
    // only pins N. The lone cell joins iff 9+1 >= d*(1+1) = 10: exact bound.
    std::mt19937_64 rng(33);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    PointSet pts3;
    // Dense cell in the bottom-left corner, lone neighbor beside it, and the
    // pinning cell in the far top-right so the two regions stay separate
    // (the center cell would be 8-adjacent to everything).
    for (int i = 0; i < 9; ++i) pts3.push_back({u(rng), u(rng)});
    pts3.push_back({1.5, 0.5});
    for (int i = 0; i < 35; ++i) pts3.push_back({2.5 + 0.01 * u(rng), 2.5 + 0.01 * u(rng)});
    // N=45, d = round(45/9*0.9) = 5 (round half away gives 5 for 4.5).
    // Dense cells: the 9-point cell and the 35-point cell (disjoint corners).
    // The lone neighbor: 9+1=10 >= 5*2=10 qualifies exactly -> joined.
    const ClusterResult r3 = scld(pts3, {9, 0.9, Rect{{0, 0}, {3, 3}}});
    check_result_invariants(r3);
    CHECK(r3.d == 5);
    const int lone = r3.assignments[9];
    CHECK(lone != kNoise);  // inclusive bound: 10 >= 10

    // Now shrink the dense cell to 8 points: 8+1=9 < 10 -> stays noise.
    PointSet pts4;
    for (int i = 0; i < 8; ++i) pts4.push_back({u(rng), u(rng)});
    pts4.push_back({1.5, 0.5});
    for (int i = 0; i < 36; ++i) pts4.push_back({2.5 + 0.01 * u(rng), 2.5 + 0.01 * u(rng)});
    const ClusterResult r4 = scld(pts4, {9, 0.9, Rect{{0, 0}, {3, 3}}});
    check_result_invariants(r4);
    CHECK(r4.d == 5);
    CHECK(r4.assignments[8] == kNoise);
}

TEST_CASE("scld: determinism") {
    const PointSet pts = blob_scene(5, 4000, 0.1);
    const ClusterResult a = scld(pts, {64, 0.9, std::nullopt});
    const ClusterResult b = scld(pts, {64, 0.9, std::nullopt});
    CHECK(a.assignments == b.assignments);
    REQUIRE(a.clusters.size() == b.clusters.size());
    for (std::size_t i = 0; i < a.clusters.size(); ++i) {
        CHECK(a.clusters[i].center == b.clusters[i].center);
        CHECK(a.clusters[i].unit_ids == b.clusters[i].unit_ids);
    }
}

TEST_CASE("scld: uniform scaling preserves structure") {
    const PointSet pts = blob_scene(6, 3000, 0.05);
    PointSet scaled;
    for (const Point& p : pts) scaled.push_back({p.x * 7.0, p.y * 7.0});
    const ClusterResult a = scld(pts, {64, 0.9, std::nullopt});
    const ClusterResult b = scld(scaled, {64, 0.9, std::nullopt});
    CHECK(a.assignments == b.assignments);
    REQUIRE(a.clusters.size() == b.clusters.size());
    for (std::size_t i = 0; i < a.clusters.size(); ++i) {
        CHECK(b.clusters[i].center.x == doctest::Approx(a.clusters[i].center.x * 7.0));
        CHECK(b.clusters[i].center.y == doctest::Approx(a.clusters[i].center.y * 7.0));
    }
}

TEST_CASE("scld: noise points are exactly those in unassigned cells") {
    const PointSet pts = blob_scene(7, 5000, 0.2);
    const ClusterResult r = scld(pts, {100, 0.9, std::nullopt});
    check_result_invariants(r);
    // Per cell: either every member has the same cluster id, or all noise.
    for (const CellStats& c : r.grid.cells) {
        std::set<int> ids;
        for (int pid : c.members) ids.insert(r.assignments[std::size_t(pid)]);
        CHECK(ids.size() <= 1);
    }
    CHECK(r.noise_count > 0);  // 20% sprinkle leaves sparse cells behind
}

TEST_CASE("incremental_update: empty delta is identity") {
    const PointSet pts = blob_scene(8, 3000, 0.1);
    const ClusterResult full = scld(pts, {64, 0.9, std::nullopt});
    const ClusterResult inc = incremental_update(full, {}, {});
    CHECK(inc.assignments == full.assignments);
    REQUIRE(inc.clusters.size() == full.clusters.size());
    for (std::size_t i = 0; i < full.clusters.size(); ++i) {
        CHECK(inc.clusters[i].center == full.clusters[i].center);
        CHECK(inc.clusters[i].point_count == full.clusters[i].point_count);
    }
}

TEST_CASE("incremental_update: unknown removal id throws") {
    const PointSet pts = blob_scene(9, 500, 0.0);
    const ClusterResult full = scld(pts, {16, 0.9, std::nullopt});
    CHECK_THROWS_AS(incremental_update(full, {}, {5000}), ValidationError);
    CHECK_THROWS_AS(incremental_update(full, {}, {-1}), ValidationError);
}

TEST_CASE("incremental_update: random deltas equal a full recompute") {
    std::mt19937_64 rng(34);
    for (int iter = 0; iter < 30; ++iter) {
        const PointSet pts = blob_scene(100 + std::uint64_t(iter), 2000, 0.1);
        const ScldParams params{49, 0.9, std::nullopt};
        const ClusterResult prev = scld(pts, params);

        // Random delta: drop up to 5%, add up to 5% near one blob.
        std::vector<int> removed;
        std::set<int> taken;
        const int n_rm = int(rng() % 100);
        while (int(taken.size()) < n_rm) taken.insert(int(rng() % pts.size()));
        removed.assign(taken.begin(), taken.end());
        PointSet added;
        std::uniform_real_distribution<double> u(-3, 3);
        const int n_add = int(rng() % 100);
        for (int i = 0; i < n_add; ++i) added.push_back({70 + u(rng), 25 + u(rng)});

        const ClusterResult inc = incremental_update(prev, added, removed);

        PointSet merged;
        for (std::size_t i = 0; i < pts.size(); ++i)
            if (!taken.count(int(i))) merged.push_back(pts[i]);
        for (const Point& p : added) merged.push_back(p);
        const ClusterResult full = scld(merged, params);

        CHECK(inc.assignments == full.assignments);
        REQUIRE(inc.clusters.size() == full.clusters.size());
        for (std::size_t c = 0; c < full.clusters.size(); ++c) {
            CHECK(inc.clusters[c].center == full.clusters[c].center);
            CHECK(inc.clusters[c].unit_ids == full.clusters[c].unit_ids);
            CHECK(inc.clusters[c].point_count == full.clusters[c].point_count);
        }
        CHECK(inc.d == full.d);
    }
}
