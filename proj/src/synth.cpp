#include "gridclust/synth.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <unordered_map>

namespace gridclust {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Per-cluster generator stream, so scenes are stable when counts change.
std::mt19937_64 stream(std::uint64_t seed, std::uint64_t idx) {
    return std::mt19937_64(splitmix64(seed ^ splitmix64(idx + 1)));
}

// Mapping raw 64-bit draws ourselves keeps scenes byte-identical across
// standard libraries.
double uniform01(std::mt19937_64& rng) { return double(rng() >> 11) * 0x1.0p-53; }

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

Point gaussian2(std::mt19937_64& rng, Point center, double sigma) {
    const double u1 = std::max(uniform01(rng), 1e-300);
    const double u2 = uniform01(rng);
    const double r = std::sqrt(-2.0 * std::log(u1)) * sigma;
    const double a = 2.0 * std::numbers::pi * u2;
    return {center.x + r * std::cos(a), center.y + r * std::sin(a)};
}

void emit(LabeledScene& scene, Point p, int label) {
    scene.points.push_back(p);
    scene.truth.push_back(label);
}

std::vector<long long> proportional_counts(long long total, const std::vector<double>& weights) {
    std::vector<long long> counts(weights.size(), 0);
    long long used = 0;
    for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
        counts[i] = round_half_away(double(total) * weights[i]);
        used += counts[i];
    }
    counts.back() = std::max<long long>(0, total - used);
    return counts;
}

void gen_ds1(const SceneSpec& spec, LabeledScene& scene, long long n_cluster) {
    const auto counts = proportional_counts(n_cluster, {0.25, 0.2, 0.2, 0.2, 0.15});

    auto rng0 = stream(spec.seed, 0);
    for (long long i = 0; i < counts[0]; ++i) emit(scene, gaussian2(rng0, {20, 80}, 4.5), 0);
    auto rng1 = stream(spec.seed, 1);
    for (long long i = 0; i < counts[1]; ++i) emit(scene, gaussian2(rng1, {80, 80}, 7.0), 1);
    auto rng2 = stream(spec.seed, 2);
    for (long long i = 0; i < counts[2]; ++i) {
        const double a = uniform(rng2, 0.0, 2.0 * std::numbers::pi);
        const double r = 12.0 + 1.5 * (uniform01(rng2) - 0.5) * 2.0;
        emit(scene, {25 + r * std::cos(a), 30 + r * std::sin(a)}, 2);
    }
    auto rng3 = stream(spec.seed, 3);
    for (long long i = 0; i < counts[3]; ++i) {
        const double t = uniform01(rng3);
        const double off = uniform(rng3, -2.0, 2.0);
        // Bar from (55,10) to (90,35); unit normal of the axis is (-dy,dx)/len.
        const double ax = 35.0, ay = 25.0, len = std::sqrt(ax * ax + ay * ay);
        emit(scene, {55 + t * ax - off * ay / len, 10 + t * ay + off * ax / len}, 3);
    }
    auto rng4 = stream(spec.seed, 4);
    for (long long i = 0; i < counts[4]; ++i)
        emit(scene, {uniform(rng4, 45, 62), uniform(rng4, 50, 70)}, 4);
}

void gen_ds2(const SceneSpec& spec, LabeledScene& scene, long long n_cluster) {
    const Point centers[4] = {{20, 20}, {70, 25}, {30, 70}, {75, 75}};
    const double radii[4] = {8, 12, 5, 14};
    const auto counts = proportional_counts(n_cluster, {0.35, 0.3, 0.1, 0.25});
    for (int c = 0; c < 4; ++c) {
        auto rng = stream(spec.seed, std::uint64_t(c));
        for (long long i = 0; i < counts[std::size_t(c)]; ++i) {
            const double a = uniform(rng, 0.0, 2.0 * std::numbers::pi);
            const double r = radii[c] * std::sqrt(uniform01(rng));
            emit(scene, {centers[c].x + r * std::cos(a), centers[c].y + r * std::sin(a)}, c);
        }
    }
}

void gen_obstacle_split(const SceneSpec& spec, LabeledScene& scene, long long n_cluster) {
    // One uniformly filled square blob bisected by a thin full-height wall.
    // Jittered-grid placement keeps per-cell counts nearly flat, so grid
    // clustering sees one solid region (two, once the wall is honored).
    constexpr double kSide = 10.0;
    constexpr double kWallLo = 4.99, kWallHi = 5.01, kClear = 0.02;
    scene.obstacles.polygons.push_back(Polygon({{kWallLo, -0.5},
                                                {kWallHi, -0.5},
                                                {kWallHi, kSide + 0.5},
                                                {kWallLo, kSide + 0.5}}));
    const long long g = std::max<long long>(1, llround(std::ceil(std::sqrt(double(n_cluster)))));
    const double step = kSide / double(g);
    auto rng = stream(spec.seed, 0);
    long long made = 0;
    for (long long row = 0; row < g && made < n_cluster; ++row) {
        for (long long col = 0; col < g && made < n_cluster; ++col) {
            double x = (double(col) + 0.5 + 0.9 * (uniform01(rng) - 0.5)) * step;
            const double y = (double(row) + 0.5 + 0.9 * (uniform01(rng) - 0.5)) * step;
            // Keep points clear of the wall; push strays to their own side.
            if (x > kWallLo - kClear && x < kWallHi + kClear) {
                x = x < 0.5 * (kWallLo + kWallHi) ? kWallLo - kClear : kWallHi + kClear;
            }
            emit(scene, {x, y}, x < kWallLo ? 0 : 1);
            ++made;
        }
    }
}

}  // namespace

ScenePreset preset_from_name(const std::string& name) {
    if (name == "ds1_shapes") return ScenePreset::ds1_shapes;
    if (name == "ds2_blobs") return ScenePreset::ds2_blobs;
    if (name == "obstacle_split") return ScenePreset::obstacle_split;
    if (name == "uniform_noise") return ScenePreset::uniform_noise;
    throw ValidationError("unknown preset: " + name);
}

std::string preset_name(ScenePreset preset) {
    switch (preset) {
        case ScenePreset::ds1_shapes: return "ds1_shapes";
        case ScenePreset::ds2_blobs: return "ds2_blobs";
        case ScenePreset::obstacle_split: return "obstacle_split";
        case ScenePreset::uniform_noise: return "uniform_noise";
    }
    return "?";
}

LabeledScene generate(const SceneSpec& spec) {
    if (spec.n < 1) throw ValidationError("scene needs n >= 1");
    if (spec.noise_fraction < 0.0 || spec.noise_fraction >= 1.0)
        throw ValidationError("noise_fraction must be in [0, 1)");

    LabeledScene scene;
    scene.points.reserve(std::size_t(spec.n));
    scene.truth.reserve(std::size_t(spec.n));
    const long long n_noise = spec.preset == ScenePreset::uniform_noise
                                  ? spec.n
                                  : round_half_away(double(spec.n) * spec.noise_fraction);
    const long long n_cluster = spec.n - n_noise;

    switch (spec.preset) {
        case ScenePreset::ds1_shapes: gen_ds1(spec, scene, n_cluster); break;
        case ScenePreset::ds2_blobs: gen_ds2(spec, scene, n_cluster); break;
        case ScenePreset::obstacle_split: gen_obstacle_split(spec, scene, n_cluster); break;
        case ScenePreset::uniform_noise: break;
    }

    auto rng = stream(spec.seed, 0xFFFF);
    const double side = spec.preset == ScenePreset::obstacle_split ? 10.0 : 100.0;
    for (long long i = 0; i < n_noise; ++i) {
        Point p{uniform(rng, 0.0, side), uniform(rng, 0.0, side)};
        while (point_strictly_inside_any(p, scene.obstacles)) {
            p = {uniform(rng, 0.0, side), uniform(rng, 0.0, side)};
        }
        emit(scene, p, kNoise);
    }
    return scene;
}

double adjusted_rand_index(const std::vector<int>& truth, const std::vector<int>& predicted) {
    if (truth.size() != predicted.size())
        throw ValidationError("label vectors differ in length");
    const double n = double(truth.size());
    if (truth.empty()) return 1.0;

    std::unordered_map<long long, long long> joint;
    std::unordered_map<int, long long> rows, cols;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const long long key =
            (static_cast<long long>(truth[i]) << 32) ^
            (static_cast<long long>(predicted[i]) & 0xffffffffLL);
        ++joint[key];
        ++rows[truth[i]];
        ++cols[predicted[i]];
    }
    auto pairs = [](long long c) { return double(c) * double(c - 1) / 2.0; };
    double sum_ij = 0.0, sum_a = 0.0, sum_b = 0.0;
    for (const auto& [k, c] : joint) sum_ij += pairs(c);
    for (const auto& [k, c] : rows) sum_a += pairs(c);
    for (const auto& [k, c] : cols) sum_b += pairs(c);
    const double total = n * (n - 1.0) / 2.0;
    if (total == 0.0) return 1.0;
    const double expected = sum_a * sum_b / total;
    const double max_index = 0.5 * (sum_a + sum_b);
    if (max_index == expected) return 1.0;  // both partitions trivial
    return (sum_ij - expected) / (max_index - expected);
}

std::vector<TimingRow> timing_sweep(const std::function<void(const PointSet&)>& algorithm,
                                    const std::function<PointSet(long long)>& scene_for_n,
                                    const std::vector<long long>& sizes, int repeats) {
    if (repeats < 1) throw ValidationError("repeats must be >= 1");
    std::vector<TimingRow> rows;
    for (long long n : sizes) {
        const PointSet pts = scene_for_n(n);
        std::vector<double> samples;
        samples.reserve(std::size_t(repeats));
        for (int r = 0; r < repeats; ++r) {
            const auto t0 = std::chrono::steady_clock::now();
            algorithm(pts);
            const auto t1 = std::chrono::steady_clock::now();
            samples.push_back(std::chrono::duration<double>(t1 - t0).count());
        }
        std::sort(samples.begin(), samples.end());
        rows.push_back({n, samples[samples.size() / 2]});
    }
    return rows;
}

}  // namespace gridclust
