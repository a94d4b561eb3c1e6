#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "gridclust/synth.hpp"

using namespace gridclust;

TEST_CASE("generate: byte determinism") {
    SceneSpec spec;
    spec.preset = ScenePreset::ds1_shapes;
    spec.n = 5000;
    spec.noise_fraction = 0.1;
    spec.seed = 77;
    const LabeledScene a = generate(spec);
    const LabeledScene b = generate(spec);
    REQUIRE(a.points.size() == b.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i) CHECK(a.points[i] == b.points[i]);
    CHECK(a.truth == b.truth);
}

TEST_CASE("generate: counts, labels and noise") {
    for (ScenePreset preset : {ScenePreset::ds1_shapes, ScenePreset::ds2_blobs,
                               ScenePreset::obstacle_split}) {
        SceneSpec spec;
        spec.preset = preset;
        spec.n = 4000;
        spec.noise_fraction = 0.0;
        spec.seed = 78;
        const LabeledScene s = generate(spec);
        CHECK(s.points.size() == 4000);
        CHECK(s.truth.size() == 4000);
        CHECK(std::count(s.truth.begin(), s.truth.end(), kNoise) == 0);
    }

    SceneSpec ds1;
    ds1.preset = ScenePreset::ds1_shapes;
    ds1.n = 42000;
    ds1.noise_fraction = 0.05;
    ds1.seed = 79;
    const LabeledScene s = generate(ds1);
    std::set<int> labels(s.truth.begin(), s.truth.end());
    CHECK(labels.count(kNoise) == 1);
    labels.erase(kNoise);
    CHECK(labels.size() == 5);  // five clusters of different shapes

    SceneSpec noise;
    noise.preset = ScenePreset::uniform_noise;
    noise.n = 1000;
    noise.seed = 80;
    const LabeledScene u = generate(noise);
    CHECK(std::count(u.truth.begin(), u.truth.end(), kNoise) == 1000);
}

TEST_CASE("generate: obstacle_split keeps points out of the wall") {
    SceneSpec spec;
    spec.preset = ScenePreset::obstacle_split;
    spec.n = 8000;
    spec.noise_fraction = 0.05;
    spec.seed = 81;
    const LabeledScene s = generate(spec);
    REQUIRE(s.obstacles.polygons.size() == 1);
    int west = 0, east = 0;
    for (std::size_t i = 0; i < s.points.size(); ++i) {
        CHECK_FALSE(point_strictly_inside_any(s.points[i], s.obstacles));
        if (s.truth[i] == 0) ++west;
        if (s.truth[i] == 1) ++east;
    }
    CHECK(west > 1000);
    CHECK(east > 1000);
}

TEST_CASE("generate: invalid specs") {
    SceneSpec bad;
    bad.n = 0;
    CHECK_THROWS_AS(generate(bad), ValidationError);
    bad.n = 10;
    bad.noise_fraction = 1.0;
    CHECK_THROWS_AS(generate(bad), ValidationError);
    CHECK_THROWS_AS(preset_from_name("nope"), ValidationError);
    CHECK(preset_from_name(preset_name(ScenePreset::obstacle_split)) ==
          ScenePreset::obstacle_split);
}

TEST_CASE("adjusted_rand_index: identity and relabeling") {
    const std::vector<int> truth{0, 0, 1, 1, 2, 2, kNoise};
    CHECK(adjusted_rand_index(truth, truth) == doctest::Approx(1.0));
    const std::vector<int> relabeled{5, 5, 9, 9, 0, 0, 7};
    CHECK(adjusted_rand_index(truth, relabeled) == doctest::Approx(1.0));
    CHECK(adjusted_rand_index(truth, relabeled) ==
          doctest::Approx(adjusted_rand_index(relabeled, truth)));
    CHECK_THROWS_AS(adjusted_rand_index({0, 1}, {0}), ValidationError);
}

TEST_CASE("adjusted_rand_index: independent labels score near zero") {
    std::mt19937_64 rng(82);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<int> a(10000), b(10000);
        for (auto& v : a) v = int(rng() % 5);
        for (auto& v : b) v = int(rng() % 5);
        CHECK(std::abs(adjusted_rand_index(a, b)) < 0.05);
    }
}

TEST_CASE("timing_sweep") {
    const auto algorithm = [](const PointSet& pts) {
        double s = 0.0;
        for (const Point& p : pts) s += p.x;
        volatile double sink = s;
        (void)sink;
    };
    const auto scene = [](long long n) {
        PointSet pts;
        for (long long i = 0; i < n; ++i) pts.push_back({double(i), 0.0});
        return pts;
    };
    const auto one = timing_sweep(algorithm, scene, {1}, 3);
    REQUIRE(one.size() == 1);
    CHECK(one[0].n == 1);
    CHECK(one[0].median_seconds >= 0.0);

    const auto rows = timing_sweep(algorithm, scene, {100, 1000, 10000}, 3);
    REQUIRE(rows.size() == 3);
    for (const TimingRow& r : rows) CHECK(r.median_seconds >= 0.0);
    CHECK_THROWS_AS(timing_sweep(algorithm, scene, {1}, 0), ValidationError);
}
