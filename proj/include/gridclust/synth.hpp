#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gridclust/geometry.hpp"
#include "gridclust/grid.hpp"

namespace gridclust {

enum class ScenePreset { ds1_shapes, ds2_blobs, obstacle_split, uniform_noise };

struct SceneSpec {
    ScenePreset preset = ScenePreset::ds2_blobs;
    long long n = 10000;
    double noise_fraction = 0.0;
    std::uint64_t seed = 0;
};

struct LabeledScene {
    PointSet points;
    std::vector<int> truth;  // ground-truth cluster id per point, kNoise for noise
    ObstacleSet obstacles;   // empty unless the preset emits one
};

ScenePreset preset_from_name(const std::string& name);
std::string preset_name(ScenePreset preset);

// Deterministic generator: the same spec always yields identical bytes.
LabeledScene generate(const SceneSpec& spec);

// Standard adjusted Rand index; the noise label counts as a class of its own.
double adjusted_rand_index(const std::vector<int>& truth, const std::vector<int>& predicted);

struct TimingRow {
    long long n = 0;
    double median_seconds = 0.0;
};

// Times `algorithm` on matched scenes per size, reporting median wall time.
std::vector<TimingRow> timing_sweep(const std::function<void(const PointSet&)>& algorithm,
                                    const std::function<PointSet(long long)>& scene_for_n,
                                    const std::vector<long long>& sizes, int repeats);

}  // namespace gridclust
