#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "gridclust/errors.hpp"

namespace gridclust {

// Tolerance for length-based comparisons, in scene units. Orientation tests
// use the plain sign of the cross product; this constant covers everything
// that cannot be decided by orientation alone.
inline constexpr double kEpsilon = 1e-9;

struct Point {
    double x = 0.0;
    double y = 0.0;
};

inline bool operator==(const Point& a, const Point& b) { return a.x == b.x && a.y == b.y; }
inline bool operator!=(const Point& a, const Point& b) { return !(a == b); }

inline double sq_dist(const Point& a, const Point& b) {
    const double dx = a.x - b.x, dy = a.y - b.y;
    return dx * dx + dy * dy;
}

inline double dist(const Point& a, const Point& b) { return std::sqrt(sq_dist(a, b)); }

struct Segment {
    Point a;
    Point b;
};

struct Rect {
    Point min;
    Point max;

    bool contains(const Point& p) const {
        return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y;
    }
    Point center() const { return {(min.x + max.x) * 0.5, (min.y + max.y) * 0.5}; }
    bool touches(const Rect& o) const {
        return min.x <= o.max.x && o.min.x <= max.x && min.y <= o.max.y && o.min.y <= max.y;
    }
};

enum class IntersectKind { none, proper, touching };
enum class Location { inside, outside, boundary };

// Sign of the cross product (b-a) x (c-a): +1 left turn, -1 right turn, 0 collinear.
int orientation(const Point& a, const Point& b, const Point& c);

// True if c lies on the closed segment ab (collinearity is required, not assumed).
bool on_segment(const Point& a, const Point& b, const Point& c);

IntersectKind segments_intersect(const Segment& s1, const Segment& s2);

// Simple polygon stored in canonical CCW order. The constructor rejects
// degenerate input: fewer than 3 vertices, consecutive collinear triples
// (which covers duplicate vertices and zero area), and self-intersection.
class Polygon {
public:
    explicit Polygon(std::vector<Point> vertices);

    const std::vector<Point>& vertices() const { return verts_; }
    std::size_t size() const { return verts_.size(); }
    Segment edge(std::size_t i) const {
        return {verts_[i], verts_[(i + 1) % verts_.size()]};
    }
    double area() const;
    Rect bounding_box() const { return bbox_; }

private:
    std::vector<Point> verts_;
    Rect bbox_;
};

Location point_in_polygon(const Point& p, const Polygon& poly);

struct ObstacleSet {
    std::vector<Polygon> polygons;

    bool empty() const { return polygons.empty(); }

    // Throws ValidationError if any two polygons intersect or nest.
    void validate_disjoint() const;
};

bool point_strictly_inside_any(const Point& p, const ObstacleSet& obstacles);

// True iff the closed segment meets the closed rectangle.
bool segment_intersects_rect(const Segment& s, const Rect& r);

// Uniform grid over obstacle boundary edges, used to prune candidate edges in
// visibility queries. Purely an accelerator: results never depend on it.
class EdgeGridIndex {
public:
    explicit EdgeGridIndex(const ObstacleSet& obstacles);

    // Appends (polygon, edge) pairs whose buckets overlap the segment's bbox.
    void candidates(const Segment& s, std::vector<std::pair<int, int>>& out) const;

private:
    int bucket_x(double x) const;
    int bucket_y(double y) const;

    Rect bounds_{};
    int nx_ = 0, ny_ = 0;
    double cw_ = 1.0, ch_ = 1.0;
    std::vector<std::vector<std::pair<int, int>>> buckets_;
    std::size_t edge_count_ = 0;
};

// True iff the open segment passes through the interior of any obstacle.
// Grazing a vertex or sliding along an edge does not block. Throws
// EndpointInsideObstacle when an endpoint is strictly interior.
bool segment_blocked(const Segment& s, const ObstacleSet& obstacles,
                     const EdgeGridIndex* index = nullptr);

}  // namespace gridclust
