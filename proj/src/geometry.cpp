#include "gridclust/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gridclust {

int orientation(const Point& a, const Point& b, const Point& c) {
    const double v = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
    if (v > 0.0) return 1;
    if (v < 0.0) return -1;
    return 0;
}

bool on_segment(const Point& a, const Point& b, const Point& c) {
    if (orientation(a, b, c) != 0) return false;
    return std::min(a.x, b.x) <= c.x && c.x <= std::max(a.x, b.x) &&
           std::min(a.y, b.y) <= c.y && c.y <= std::max(a.y, b.y);
}

IntersectKind segments_intersect(const Segment& s1, const Segment& s2) {
    const Point &a = s1.a, &b = s1.b, &c = s2.a, &d = s2.b;
    const int o1 = orientation(a, b, c);
    const int o2 = orientation(a, b, d);
    const int o3 = orientation(c, d, a);
    const int o4 = orientation(c, d, b);

    if (o1 * o2 < 0 && o3 * o4 < 0) return IntersectKind::proper;

    if (o1 == 0 && on_segment(a, b, c)) return IntersectKind::touching;
    if (o2 == 0 && on_segment(a, b, d)) return IntersectKind::touching;
    if (o3 == 0 && on_segment(c, d, a)) return IntersectKind::touching;
    if (o4 == 0 && on_segment(c, d, b)) return IntersectKind::touching;
    return IntersectKind::none;
}

namespace {

Rect bbox_of(const std::vector<Point>& pts) {
    Rect r{{pts[0].x, pts[0].y}, {pts[0].x, pts[0].y}};
    for (const Point& p : pts) {
        r.min.x = std::min(r.min.x, p.x);
        r.min.y = std::min(r.min.y, p.y);
        r.max.x = std::max(r.max.x, p.x);
        r.max.y = std::max(r.max.y, p.y);
    }
    return r;
}

double signed_area(const std::vector<Point>& v) {
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Point& p = v[i];
        const Point& q = v[(i + 1) % v.size()];
        s += p.x * q.y - q.x * p.y;
    }
    return 0.5 * s;
}

}  // namespace

Polygon::Polygon(std::vector<Point> vertices) : verts_(std::move(vertices)) {
    const std::size_t n = verts_.size();
    if (n < 3) throw ValidationError("polygon needs at least 3 vertices");
    for (const Point& p : verts_) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y))
            throw ValidationError("polygon vertex is not finite");
    }
    for (std::size_t i = 0; i < n; ++i) {
        const Point& a = verts_[i];
        const Point& b = verts_[(i + 1) % n];
        const Point& c = verts_[(i + 2) % n];
        if (orientation(a, b, c) == 0)
            throw ValidationError("polygon has collinear or duplicate consecutive vertices");
    }
    // Simplicity: non-adjacent edges must not meet at all; adjacent edges only
    // share their common endpoint (collinear overlap was rejected above).
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
            const IntersectKind k = segments_intersect(edge(i), edge(j));
            if (adjacent) continue;
            if (k != IntersectKind::none) throw ValidationError("polygon is self-intersecting");
        }
    }
    if (signed_area(verts_) < 0.0) std::reverse(verts_.begin(), verts_.end());
    bbox_ = bbox_of(verts_);
}

double Polygon::area() const { return signed_area(verts_); }

Location point_in_polygon(const Point& p, const Polygon& poly) {
    const std::vector<Point>& v = poly.vertices();
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (on_segment(v[i], v[(i + 1) % n], p)) return Location::boundary;
    }
    // Ray crossings: count boundary crossings of the rightward ray from p.
    bool inside = false;
    for (std::size_t i = 0; i < n; ++i) {
        const Point& a = v[i];
        const Point& b = v[(i + 1) % n];
        if ((a.y > p.y) != (b.y > p.y)) {
            const double xint = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if (p.x < xint) inside = !inside;
        }
    }
    return inside ? Location::inside : Location::outside;
}

void ObstacleSet::validate_disjoint() const {
    for (std::size_t i = 0; i < polygons.size(); ++i) {
        for (std::size_t j = i + 1; j < polygons.size(); ++j) {
            const Polygon& a = polygons[i];
            const Polygon& b = polygons[j];
            if (!a.bounding_box().touches(b.bounding_box())) continue;
            for (std::size_t e = 0; e < a.size(); ++e) {
                for (std::size_t f = 0; f < b.size(); ++f) {
                    if (segments_intersect(a.edge(e), b.edge(f)) != IntersectKind::none)
                        throw ValidationError("obstacles intersect");
                }
            }
            if (point_in_polygon(a.vertices()[0], b) == Location::inside ||
                point_in_polygon(b.vertices()[0], a) == Location::inside)
                throw ValidationError("one obstacle is nested inside another");
        }
    }
}

bool point_strictly_inside_any(const Point& p, const ObstacleSet& obstacles) {
    for (const Polygon& poly : obstacles.polygons) {
        if (!poly.bounding_box().contains(p)) continue;
        if (point_in_polygon(p, poly) == Location::inside) return true;
    }
    return false;
}

bool segment_intersects_rect(const Segment& s, const Rect& r) {
    if (r.contains(s.a) || r.contains(s.b)) return true;
    const Point c1 = r.min, c2{r.max.x, r.min.y}, c3 = r.max, c4{r.min.x, r.max.y};
    const Segment edges[4] = {{c1, c2}, {c2, c3}, {c3, c4}, {c4, c1}};
    for (const Segment& e : edges) {
        if (segments_intersect(s, e) != IntersectKind::none) return true;
    }
    return false;
}

EdgeGridIndex::EdgeGridIndex(const ObstacleSet& obstacles) {
    for (const Polygon& p : obstacles.polygons) edge_count_ += p.size();
    if (edge_count_ == 0) return;

    bool first = true;
    for (const Polygon& p : obstacles.polygons) {
        const Rect b = p.bounding_box();
        if (first) {
            bounds_ = b;
            first = false;
        } else {
            bounds_.min.x = std::min(bounds_.min.x, b.min.x);
            bounds_.min.y = std::min(bounds_.min.y, b.min.y);
            bounds_.max.x = std::max(bounds_.max.x, b.max.x);
            bounds_.max.y = std::max(bounds_.max.y, b.max.y);
        }
    }
    const int g = std::max(1, static_cast<int>(std::ceil(std::sqrt(double(edge_count_)))));
    nx_ = ny_ = g;
    cw_ = std::max(bounds_.max.x - bounds_.min.x, kEpsilon) / nx_;
    ch_ = std::max(bounds_.max.y - bounds_.min.y, kEpsilon) / ny_;
    buckets_.assign(std::size_t(nx_) * ny_, {});

    int edge_id = 0;
    for (std::size_t pi = 0; pi < obstacles.polygons.size(); ++pi) {
        const Polygon& p = obstacles.polygons[pi];
        for (std::size_t ei = 0; ei < p.size(); ++ei, ++edge_id) {
            const Segment e = p.edge(ei);
            const int x0 = bucket_x(std::min(e.a.x, e.b.x));
            const int x1 = bucket_x(std::max(e.a.x, e.b.x));
            const int y0 = bucket_y(std::min(e.a.y, e.b.y));
            const int y1 = bucket_y(std::max(e.a.y, e.b.y));
            for (int y = y0; y <= y1; ++y)
                for (int x = x0; x <= x1; ++x)
                    buckets_[std::size_t(y) * nx_ + x].emplace_back(int(pi), int(ei));
        }
    }
}

int EdgeGridIndex::bucket_x(double x) const {
    const int i = static_cast<int>(std::floor((x - bounds_.min.x) / cw_));
    return std::clamp(i, 0, nx_ - 1);
}

int EdgeGridIndex::bucket_y(double y) const {
    const int i = static_cast<int>(std::floor((y - bounds_.min.y) / ch_));
    return std::clamp(i, 0, ny_ - 1);
}

void EdgeGridIndex::candidates(const Segment& s, std::vector<std::pair<int, int>>& out) const {
    out.clear();
    if (edge_count_ == 0) return;
    const double lox = std::min(s.a.x, s.b.x), hix = std::max(s.a.x, s.b.x);
    const double loy = std::min(s.a.y, s.b.y), hiy = std::max(s.a.y, s.b.y);
    if (hix < bounds_.min.x || lox > bounds_.max.x || hiy < bounds_.min.y || loy > bounds_.max.y)
        return;
    const int x0 = bucket_x(lox), x1 = bucket_x(hix);
    const int y0 = bucket_y(loy), y1 = bucket_y(hiy);
    for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
            const auto& b = buckets_[std::size_t(y) * nx_ + x];
            out.insert(out.end(), b.begin(), b.end());
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
}

namespace {

// Parameter of point p along segment s, assuming p lies on s.
double param_on_segment(const Segment& s, const Point& p) {
    const double dx = s.b.x - s.a.x, dy = s.b.y - s.a.y;
    if (std::abs(dx) >= std::abs(dy)) {
        return dx == 0.0 ? 0.0 : (p.x - s.a.x) / dx;
    }
    return (p.y - s.a.y) / dy;
}

}  // namespace

bool segment_blocked(const Segment& s, const ObstacleSet& obstacles, const EdgeGridIndex* index) {
    if (obstacles.empty()) return false;
    if (point_strictly_inside_any(s.a, obstacles) || point_strictly_inside_any(s.b, obstacles))
        throw EndpointInsideObstacle();
    if (s.a == s.b) return false;

    // Touch parameters along s, per polygon, for the interior-midpoint test.
    // Stretches where s runs along a polygon edge (collinear overlap) are on
    // the boundary by construction; they are recorded so the midpoint test
    // can skip them instead of asking point_in_polygon about a midpoint that
    // floating point nudges off the boundary line.
    const std::size_t npoly = obstacles.polygons.size();
    static thread_local std::vector<std::vector<double>> touch;
    static thread_local std::vector<std::vector<std::pair<double, double>>> slide;
    touch.assign(npoly, {});
    slide.assign(npoly, {});
    static thread_local std::vector<std::pair<int, int>> cand;

    auto process_edge = [&](int pi, const Segment& e) -> bool {
        const IntersectKind k = segments_intersect(s, e);
        if (k == IntersectKind::proper) return true;
        if (k == IntersectKind::touching) {
            auto& ts = touch[std::size_t(pi)];
            if (on_segment(s.a, s.b, e.a)) ts.push_back(param_on_segment(s, e.a));
            if (on_segment(s.a, s.b, e.b)) ts.push_back(param_on_segment(s, e.b));
            if (on_segment(e.a, e.b, s.a)) ts.push_back(0.0);
            if (on_segment(e.a, e.b, s.b)) ts.push_back(1.0);
            if (orientation(s.a, s.b, e.a) == 0 && orientation(s.a, s.b, e.b) == 0) {
                double ta = param_on_segment(s, e.a);
                double tb = param_on_segment(s, e.b);
                if (ta > tb) std::swap(ta, tb);
                const double lo = std::max(0.0, ta), hi = std::min(1.0, tb);
                if (hi > lo) slide[std::size_t(pi)].emplace_back(lo, hi);
            }
        }
        return false;
    };

    if (index != nullptr) {
        index->candidates(s, cand);
        for (const auto& [pi, ei] : cand) {
            if (process_edge(pi, obstacles.polygons[std::size_t(pi)].edge(std::size_t(ei))))
                return true;
        }
    } else {
        for (std::size_t pi = 0; pi < npoly; ++pi) {
            const Polygon& poly = obstacles.polygons[pi];
            for (std::size_t ei = 0; ei < poly.size(); ++ei) {
                if (process_edge(int(pi), poly.edge(ei))) return true;
            }
        }
    }

    // No proper crossing. The segment can still pass through an interior by
    // entering and leaving at vertices or along edges: test the midpoint of
    // every stretch between consecutive boundary touches.
    for (std::size_t pi = 0; pi < npoly; ++pi) {
        auto& ts = touch[pi];
        if (ts.empty()) continue;
        ts.push_back(0.0);
        ts.push_back(1.0);
        std::sort(ts.begin(), ts.end());
        const Polygon& poly = obstacles.polygons[pi];
        for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
            if (ts[i + 1] - ts[i] < 1e-12) continue;
            const double t = 0.5 * (ts[i] + ts[i + 1]);
            bool on_edge = false;
            for (const auto& [lo, hi] : slide[pi]) {
                if (t >= lo - 1e-12 && t <= hi + 1e-12) {
                    on_edge = true;
                    break;
                }
            }
            if (on_edge) continue;
            const Point mid{s.a.x + t * (s.b.x - s.a.x), s.a.y + t * (s.b.y - s.a.y)};
            if (point_in_polygon(mid, poly) == Location::inside) return true;
        }
    }
    return false;
}

}  // namespace gridclust
