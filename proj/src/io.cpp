#include "gridclust/io.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace gridclust {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open file: " + path);
    return in;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ComputeError("cannot write file: " + path);
    return out;
}

double parse_double(std::string_view sv, const std::string& path, int line) {
    double v = 0.0;
    const char* first = sv.data();
    const char* last = sv.data() + sv.size();
    while (first < last && (*first == ' ' || *first == '\t')) ++first;
    while (last > first && (last[-1] == ' ' || last[-1] == '\t' || last[-1] == '\r')) --last;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || !std::isfinite(v)) {
        throw ValidationError(path + ":" + std::to_string(line) + ": malformed number");
    }
    return v;
}

}  // namespace

PointSet load_points(const std::string& path) {
    std::ifstream in = open_in(path);
    PointSet points;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view sv{line};
        while (!sv.empty() && (sv.front() == ' ' || sv.front() == '\t')) sv.remove_prefix(1);
        if (sv.empty() || sv.front() == '#' || sv == "\r") continue;
        const auto comma = sv.find(',');
        if (comma == std::string_view::npos)
            throw ValidationError(path + ":" + std::to_string(lineno) + ": expected \"x,y\"");
        points.push_back({parse_double(sv.substr(0, comma), path, lineno),
                          parse_double(sv.substr(comma + 1), path, lineno)});
    }
    if (points.empty()) throw ValidationError(path + ": no points");
    return points;
}

void save_points(const PointSet& points, const std::string& path) {
    std::ofstream out = open_out(path);
    out.precision(17);
    for (const Point& p : points) out << p.x << ',' << p.y << '\n';
}

ObstacleSet load_obstacles(const std::string& path) {
    std::ifstream in = open_in(path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ValidationError(path + ": invalid JSON: " + e.what());
    }
    if (!doc.is_array()) throw ValidationError(path + ": expected a top-level list");
    ObstacleSet set;
    for (const json& entry : doc) {
        if (!entry.is_object() || !entry.contains("vertices") || !entry["vertices"].is_array())
            throw ValidationError(path + ": each obstacle needs a \"vertices\" list");
        std::vector<Point> verts;
        for (const json& v : entry["vertices"]) {
            if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
                throw ValidationError(path + ": vertices must be [x,y] pairs");
            verts.push_back({v[0].get<double>(), v[1].get<double>()});
        }
        set.polygons.emplace_back(std::move(verts));  // validates and canonicalizes
    }
    set.validate_disjoint();
    return set;
}

void save_obstacles(const ObstacleSet& obstacles, const std::string& path) {
    json doc = json::array();
    for (const Polygon& poly : obstacles.polygons) {
        json verts = json::array();
        for (const Point& p : poly.vertices()) verts.push_back({p.x, p.y});
        doc.push_back({{"vertices", verts}});
    }
    open_out(path) << doc.dump(2) << '\n';
}

std::vector<int> load_assignments(const std::string& path) {
    std::ifstream in = open_in(path);
    std::vector<int> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw ValidationError(path + ":" + std::to_string(lineno) + ": expected \"index,cluster\"");
        const int idx = int(parse_double(std::string_view(line).substr(0, comma), path, lineno));
        const int cl = int(parse_double(std::string_view(line).substr(comma + 1), path, lineno));
        if (idx != int(out.size()))
            throw ValidationError(path + ":" + std::to_string(lineno) + ": indices must be dense and ordered");
        out.push_back(cl);
    }
    return out;
}

std::uint64_t digest_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open file: " + path);
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    char buf[1 << 14];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            hash ^= std::uint64_t(static_cast<unsigned char>(buf[i]));
            hash *= 0x100000001b3ULL;
        }
    }
    return hash;
}

void save_result(const ClusterResult& result, const std::string& algorithm,
                 const RunTimings& timings, std::uint64_t points_digest,
                 std::uint64_t obstacles_digest, const std::string& dir) {
    fs::create_directories(dir);
    {
        std::ofstream out = open_out((fs::path(dir) / "assignments.csv").string());
        for (std::size_t i = 0; i < result.assignments.size(); ++i)
            out << i << ',' << result.assignments[i] << '\n';
    }
    json manifest;
    manifest["algorithm"] = algorithm;
    manifest["params"] = {{"m", result.m}, {"h", result.h}, {"d", result.d}};
    char hexbuf[32];
    std::snprintf(hexbuf, sizeof hexbuf, "%016llx", static_cast<unsigned long long>(points_digest));
    manifest["inputs"] = {{"points_fnv1a", std::string(hexbuf)}};
    std::snprintf(hexbuf, sizeof hexbuf, "%016llx",
                  static_cast<unsigned long long>(obstacles_digest));
    manifest["inputs"]["obstacles_fnv1a"] = std::string(hexbuf);
    manifest["timings_seconds"] = {{"build", timings.build_seconds},
                                   {"cluster", timings.cluster_seconds},
                                   {"center", timings.center_seconds},
                                   {"total", timings.total_seconds}};
    json clusters = json::array();
    for (const Cluster& c : result.clusters) {
        clusters.push_back({{"id", c.id},
                            {"point_count", c.point_count},
                            {"unit_count", c.t},
                            {"center", {c.center.x, c.center.y}}});
    }
    manifest["clusters"] = clusters;
    manifest["noise_count"] = result.noise_count;
    open_out((fs::path(dir) / "manifest.json").string()) << manifest.dump(2) << '\n';
}

void render_svg(const PointSet& points, const std::vector<int>* assignments,
                const ObstacleSet* obstacles, const std::string& path,
                const RenderOptions& options) {
    static const char* kPalette[] = {"#e41a1c", "#377eb8", "#4daf4a", "#984ea3", "#ff7f00",
                                     "#a65628", "#f781bf", "#17becf", "#bcbd22", "#8c564b"};
    constexpr int kPaletteSize = 10;

    Rect box{{0, 0}, {1, 1}};
    if (!points.empty()) {
        box = Rect{points[0], points[0]};
        for (const Point& p : points) {
            box.min.x = std::min(box.min.x, p.x);
            box.min.y = std::min(box.min.y, p.y);
            box.max.x = std::max(box.max.x, p.x);
            box.max.y = std::max(box.max.y, p.y);
        }
    }
    const double spanx = std::max(box.max.x - box.min.x, 1e-12);
    const double spany = std::max(box.max.y - box.min.y, 1e-12);
    const double scale = options.width / spanx;
    const double hpx = spany * scale;
    const double margin = 8.0;
    const double r = std::max(1.0, options.width / 400.0);

    auto sx = [&](double x) { return margin + (x - box.min.x) * scale; };
    auto sy = [&](double y) { return margin + (box.max.y - y) * scale; };  // y grows upward

    std::ofstream out = open_out(path);
    out.precision(8);
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
        << options.width + 2 * margin << "\" height=\"" << hpx + 2 * margin << "\">\n";

    if (options.grid_m && *options.grid_m >= 1) {
        const int w = int(std::lround(std::sqrt(double(*options.grid_m))));
        out << "<g stroke=\"#cccccc\" stroke-width=\"0.5\">\n";
        for (int i = 0; i <= w; ++i) {
            const double gx = sx(box.min.x + spanx * i / w);
            const double gy = sy(box.min.y + spany * i / w);
            out << "<line x1=\"" << gx << "\" y1=\"" << sy(box.min.y) << "\" x2=\"" << gx
                << "\" y2=\"" << sy(box.max.y) << "\"/>\n";
            out << "<line x1=\"" << sx(box.min.x) << "\" y1=\"" << gy << "\" x2=\""
                << sx(box.max.x) << "\" y2=\"" << gy << "\"/>\n";
        }
        out << "</g>\n";
    }

    if (obstacles != nullptr) {
        for (const Polygon& poly : obstacles->polygons) {
            out << "<polygon fill=\"#555555\" fill-opacity=\"0.6\" stroke=\"#222222\" points=\"";
            for (const Point& p : poly.vertices()) out << sx(p.x) << ',' << sy(p.y) << ' ';
            out << "\"/>\n";
        }
    }

    for (std::size_t i = 0; i < points.size(); ++i) {
        const int cl = assignments != nullptr && i < assignments->size() ? (*assignments)[i] : 0;
        const char* color = cl == kNoise ? "#999999" : kPalette[cl % kPaletteSize];
        out << "<circle cx=\"" << sx(points[i].x) << "\" cy=\"" << sy(points[i].y) << "\" r=\""
            << r << "\" fill=\"" << color << "\"/>\n";
    }
    out << "</svg>\n";
}

}  // namespace gridclust
