#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "gridclust/clarans.hpp"
#include "gridclust/cpo.hpp"
#include "gridclust/io.hpp"
#include "gridclust/scld.hpp"
#include "gridclust/synth.hpp"

namespace gc = gridclust;
namespace fs = std::filesystem;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<long long> parse_sizes(const std::string& csv) {
    std::vector<long long> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoll(item));
    if (out.empty()) throw gc::ValidationError("--sizes is empty");
    return out;
}

int run_gen(const std::string& preset, long long n, std::uint64_t seed, double noise,
            const std::string& out, const std::string& obstacles_out,
            const std::string& truth_out) {
    gc::SceneSpec spec{gc::preset_from_name(preset), n, noise, seed};
    const gc::LabeledScene scene = gc::generate(spec);
    gc::save_points(scene.points, out);
    if (!obstacles_out.empty()) gc::save_obstacles(scene.obstacles, obstacles_out);
    if (!truth_out.empty()) {
        std::ofstream f(truth_out);
        for (std::size_t i = 0; i < scene.truth.size(); ++i)
            f << i << ',' << scene.truth[i] << '\n';
    }
    std::cout << "wrote " << scene.points.size() << " points to " << out << '\n';
    return 0;
}

int run_cluster(const std::string& algo, const std::string& points_path,
                const std::string& obstacles_path, long long m, double h, int k,
                std::uint64_t seed, int numlocal, long long maxneighbor,
                const std::string& out_dir) {
    const auto t_start = std::chrono::steady_clock::now();
    const gc::PointSet points = gc::load_points(points_path);
    gc::ObstacleSet obstacles;
    std::uint64_t obstacles_digest = 0;
    if (!obstacles_path.empty()) {
        obstacles = gc::load_obstacles(obstacles_path);
        obstacles_digest = gc::digest_file(obstacles_path);
    } else if (algo == "cpo-wfc" || algo == "cpo-wcc") {
        std::cerr << "warning: no --obstacles given; running obstacle-free\n";
    }
    const double build_s = seconds_since(t_start);

    gc::RunTimings timings;
    timings.build_seconds = build_s;
    const auto t_cluster = std::chrono::steady_clock::now();

    gc::ClusterResult result;
    if (algo == "scld") {
        result = gc::scld(points, {m, h, std::nullopt});
    } else if (algo == "cpo-wfc") {
        result = gc::cpo_wfc(points, obstacles, {m, h, std::nullopt});
    } else if (algo == "cpo-wcc") {
        result = gc::cpo_wcc(points, obstacles);
    } else if (algo == "clarans") {
        const gc::MedoidSolution sol = gc::clarans(points, {k, numlocal, maxneighbor, seed});
        result.points = points;
        result.assignments = sol.assignments;
        result.m = 0;
        result.h = 0.0;
        for (std::size_t i = 0; i < sol.medoids.size(); ++i) {
            gc::Cluster c;
            c.id = int(i);
            c.center = points[std::size_t(sol.medoids[i])];
            for (int a : sol.assignments)
                if (a == int(i)) ++c.point_count;
            result.clusters.push_back(c);
        }
    } else {
        throw gc::ValidationError("unknown --algo: " + algo);
    }
    timings.cluster_seconds = seconds_since(t_cluster);
    timings.total_seconds = seconds_since(t_start);

    gc::save_result(result, algo, timings, gc::digest_file(points_path), obstacles_digest,
                    out_dir);
    std::cout << algo << ": " << result.clusters.size() << " clusters, " << result.noise_count
              << " noise points; results in " << out_dir << '\n';
    return 0;
}

int run_update(const std::string& points_path, const std::string& add_path,
               const std::string& remove_path, long long m, double h,
               const std::string& out_dir) {
    const auto t_start = std::chrono::steady_clock::now();
    const gc::PointSet points = gc::load_points(points_path);
    gc::ClusterResult prev = gc::scld(points, {m, h, std::nullopt});

    gc::PointSet added;
    if (!add_path.empty()) added = gc::load_points(add_path);
    std::vector<int> removed;
    if (!remove_path.empty()) {
        std::ifstream f(remove_path);
        if (!f) throw gc::ValidationError("cannot open file: " + remove_path);
        int id = 0;
        while (f >> id) removed.push_back(id);
    }
    const gc::ClusterResult result = gc::incremental_update(prev, added, removed);
    gc::RunTimings timings;
    timings.total_seconds = seconds_since(t_start);
    gc::save_result(result, "scld-update", timings, gc::digest_file(points_path), 0, out_dir);
    std::cout << "update: " << result.clusters.size() << " clusters on "
              << result.points.size() << " points; results in " << out_dir << '\n';
    return 0;
}

int run_bench(const std::string& algos_csv, const std::string& sizes_csv, int repeats,
              long long m, int k, std::uint64_t seed, const std::string& out) {
    const std::vector<long long> sizes = parse_sizes(sizes_csv);
    std::ofstream f(out);
    if (!f) throw gc::ValidationError("cannot write: " + out);
    f << "algorithm,n,median_seconds\n";

    auto scene_for_n = [&](long long n) {
        return gc::generate({gc::ScenePreset::ds2_blobs, n, 0.05, seed}).points;
    };
    std::stringstream ss(algos_csv);
    std::string algo;
    while (std::getline(ss, algo, ',')) {
        std::function<void(const gc::PointSet&)> fn;
        if (algo == "scld") {
            fn = [&](const gc::PointSet& pts) { gc::scld(pts, {m, 0.9, std::nullopt}); };
        } else if (algo == "clarans") {
            fn = [&](const gc::PointSet& pts) { gc::clarans(pts, {k, 1, 0, seed}); };
        } else if (algo == "cpo-wcc") {
            fn = [&](const gc::PointSet& pts) { gc::cpo_wcc(pts, gc::ObstacleSet{}); };
        } else {
            throw gc::ValidationError("unknown bench algorithm: " + algo);
        }
        for (const gc::TimingRow& row : gc::timing_sweep(fn, scene_for_n, sizes, repeats)) {
            f << algo << ',' << row.n << ',' << row.median_seconds << '\n';
            std::cout << algo << " n=" << row.n << " median=" << row.median_seconds << "s\n";
        }
    }
    return 0;
}

int run_render(const std::string& points_path, const std::string& assignments_path,
               const std::string& obstacles_path, long long grid_m, const std::string& out) {
    const gc::PointSet points = gc::load_points(points_path);
    std::vector<int> assignments;
    gc::ObstacleSet obstacles;
    if (!assignments_path.empty()) assignments = gc::load_assignments(assignments_path);
    if (!obstacles_path.empty()) obstacles = gc::load_obstacles(obstacles_path);
    gc::RenderOptions opts;
    if (grid_m > 0) opts.grid_m = grid_m;
    gc::render_svg(points, assignments.empty() ? nullptr : &assignments,
                   obstacles.empty() ? nullptr : &obstacles, out, opts);
    std::cout << "wrote " << out << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Grid-based spatial clustering with polygonal obstacles"};
    // Long-form help only: the default -h short flag collides with --h, the
    // density proportion, and subcommands inherit this default.
    app.set_help_flag("--help", "show help");
    app.option_defaults()->ignore_case(false);
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "Generate a synthetic scene");
    std::string preset = "ds2_blobs", gen_out = "points.csv", gen_obs_out, gen_truth_out;
    long long gen_n = 10000;
    std::uint64_t gen_seed = 0;
    double gen_noise = 0.0;
    gen->add_option("--preset", preset, "ds1_shapes|ds2_blobs|obstacle_split|uniform_noise");
    gen->add_option("--n", gen_n, "point count");
    gen->add_option("--seed", gen_seed, "RNG seed");
    gen->add_option("--noise", gen_noise, "noise fraction in [0,1)");
    gen->add_option("--out", gen_out, "points output path")->required();
    gen->add_option("--obstacles-out", gen_obs_out, "obstacles JSON output path");
    gen->add_option("--truth-out", gen_truth_out, "ground-truth labels output path");

    // cluster
    auto* cluster = app.add_subcommand("cluster", "Cluster a points file");
    std::string algo = "scld", pts_path, obs_path, out_dir = "out";
    long long m = 1024, maxneighbor = 0;
    double h = 0.9;
    int k = 5, numlocal = 2;
    std::uint64_t seed = 0;
    cluster->add_option("--algo", algo, "scld|cpo-wfc|cpo-wcc|clarans");
    cluster->add_option("--points", pts_path, "points file")->required();
    cluster->add_option("--obstacles", obs_path, "obstacles JSON file");
    cluster->add_option("--m", m, "cell count (perfect square)");
    cluster->add_option("--h", h, "density proportion in (0,1]");
    cluster->add_option("--k", k, "cluster count (clarans)");
    cluster->add_option("--seed", seed, "RNG seed (clarans)");
    cluster->add_option("--numlocal", numlocal, "clarans restarts");
    cluster->add_option("--maxneighbor", maxneighbor, "clarans neighbor tries (0 = default)");
    cluster->add_option("--out", out_dir, "output directory");

    // update
    auto* update = app.add_subcommand("update", "Incremental SCLD update");
    std::string upd_points, upd_add, upd_remove, upd_out = "out";
    long long upd_m = 1024;
    double upd_h = 0.9;
    update->add_option("--points", upd_points, "original points file")->required();
    update->add_option("--add", upd_add, "points file to add");
    update->add_option("--remove", upd_remove, "file of point ids to remove");
    update->add_option("--m", upd_m, "cell count (perfect square)");
    update->add_option("--h", upd_h, "density proportion");
    update->add_option("--out", upd_out, "output directory");

    // bench
    auto* bench = app.add_subcommand("bench", "Run a timing sweep");
    std::string algos = "scld", sizes = "20000,40000,60000", bench_out = "bench.csv";
    int repeats = 5, bench_k = 5;
    long long bench_m = 1024;
    std::uint64_t bench_seed = 0;
    bench->add_option("--algos", algos, "comma-separated: scld,clarans,cpo-wcc");
    bench->add_option("--sizes", sizes, "comma-separated point counts");
    bench->add_option("--repeats", repeats, "runs per size");
    bench->add_option("--m", bench_m, "cell count for scld");
    bench->add_option("--k", bench_k, "k for clarans");
    bench->add_option("--seed", bench_seed, "scene/algorithm seed");
    bench->add_option("--out", bench_out, "CSV output path");

    // render
    auto* render = app.add_subcommand("render", "Render a scene to SVG");
    std::string r_points, r_assign, r_obs, r_out = "scene.svg";
    long long r_grid_m = 0;
    render->add_option("--points", r_points, "points file")->required();
    render->add_option("--assignments", r_assign, "assignments CSV");
    render->add_option("--obstacles", r_obs, "obstacles JSON");
    render->add_option("--grid-m", r_grid_m, "draw grid lines for this cell count");
    render->add_option("--out", r_out, "SVG output path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed())
            return run_gen(preset, gen_n, gen_seed, gen_noise, gen_out, gen_obs_out,
                           gen_truth_out);
        if (cluster->parsed())
            return run_cluster(algo, pts_path, obs_path, m, h, k, seed, numlocal, maxneighbor,
                               out_dir);
        if (update->parsed()) return run_update(upd_points, upd_add, upd_remove, upd_m, upd_h,
                                                upd_out);
        if (bench->parsed())
            return run_bench(algos, sizes, repeats, bench_m, bench_k, bench_seed, bench_out);
        if (render->parsed()) return run_render(r_points, r_assign, r_obs, r_grid_m, r_out);
    } catch (const gc::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
