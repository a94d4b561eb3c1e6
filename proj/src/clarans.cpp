#include "gridclust/clarans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace gridclust {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Unbiased-enough bounded draw that does not depend on the standard
// library's distribution implementation.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) { return rng() % n; }

struct LocalState {
    std::vector<int> medoids;       // current medoid point ids
    std::vector<char> is_medoid;    // by point id
    std::vector<int> nearest;       // index into medoids per point
    std::vector<double> d_nearest;  // distance to nearest medoid
    std::vector<double> d_second;   // distance to second-nearest medoid
    double cost = 0.0;
};

void recompute(const PointSet& pts, LocalState& st) {
    const int k = int(st.medoids.size());
    st.cost = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        double d1 = std::numeric_limits<double>::infinity(), d2 = d1;
        int n1 = 0;
        for (int j = 0; j < k; ++j) {
            const double d = dist(pts[i], pts[std::size_t(st.medoids[std::size_t(j)])]);
            if (d < d1) {
                d2 = d1;
                d1 = d;
                n1 = j;
            } else if (d < d2) {
                d2 = d;
            }
        }
        st.nearest[i] = n1;
        st.d_nearest[i] = d1;
        st.d_second[i] = d2;
        st.cost += d1;
    }
}

// Cost change of replacing medoid slot `slot` with point `cand`.
double swap_delta(const PointSet& pts, const LocalState& st, int slot, int cand) {
    double delta = 0.0;
    const Point& c = pts[std::size_t(cand)];
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double dc = dist(pts[i], c);
        if (st.nearest[i] == slot) {
            delta += std::min(dc, st.d_second[i]) - st.d_nearest[i];
        } else if (dc < st.d_nearest[i]) {
            delta += dc - st.d_nearest[i];
        }
    }
    return delta;
}

}  // namespace

MedoidSolution clarans(const PointSet& points, const ClaransParams& params) {
    const long long n = static_cast<long long>(points.size());
    if (n == 0) throw ValidationError("empty point set");
    if (params.k < 1 || params.k > n) throw ValidationError("k must be in [1, N]");
    if (params.numlocal < 1) throw ValidationError("numlocal must be >= 1");
    const int k = params.k;
    long long maxneighbor = params.maxneighbor;
    if (maxneighbor <= 0)
        maxneighbor = std::max<long long>(250, round_half_away(0.0125 * k * double(n - k)));

    MedoidSolution best;
    best.cost = std::numeric_limits<double>::infinity();

    for (int local = 0; local < params.numlocal; ++local) {
        std::mt19937_64 rng(splitmix64(params.seed ^ (0x6b79ULL * std::uint64_t(local + 1))));

        LocalState st;
        st.is_medoid.assign(std::size_t(n), 0);
        st.nearest.assign(std::size_t(n), 0);
        st.d_nearest.assign(std::size_t(n), 0.0);
        st.d_second.assign(std::size_t(n), 0.0);
        // Random initial medoid set via partial Fisher-Yates.
        std::vector<int> ids(static_cast<std::size_t>(n));
        for (long long i = 0; i < n; ++i) ids[std::size_t(i)] = int(i);
        for (int j = 0; j < k; ++j) {
            const auto r = j + bounded(rng, std::uint64_t(n - j));
            std::swap(ids[std::size_t(j)], ids[std::size_t(r)]);
            st.medoids.push_back(ids[std::size_t(j)]);
            st.is_medoid[std::size_t(ids[std::size_t(j)])] = 1;
        }
        recompute(points, st);

        long long failures = 0;
        while (failures < maxneighbor && k < n) {
            const int slot = int(bounded(rng, std::uint64_t(k)));
            int cand = int(bounded(rng, std::uint64_t(n)));
            while (st.is_medoid[std::size_t(cand)]) cand = int(bounded(rng, std::uint64_t(n)));
            const double delta = swap_delta(points, st, slot, cand);
            if (delta < 0.0) {
                st.is_medoid[std::size_t(st.medoids[std::size_t(slot)])] = 0;
                st.medoids[std::size_t(slot)] = cand;
                st.is_medoid[std::size_t(cand)] = 1;
                recompute(points, st);
                failures = 0;
            } else {
                ++failures;
            }
        }

        if (st.cost < best.cost) {
            best.cost = st.cost;
            best.medoids = st.medoids;
            best.assignments = st.nearest;
        }
    }

    // Canonical order: medoids ascending, assignments renumbered to match.
    std::vector<int> order(best.medoids.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = int(i);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return best.medoids[std::size_t(a)] < best.medoids[std::size_t(b)]; });
    std::vector<int> rank(order.size());
    std::vector<int> sorted(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        rank[std::size_t(order[i])] = int(i);
        sorted[i] = best.medoids[std::size_t(order[i])];
    }
    best.medoids = std::move(sorted);
    for (int& a : best.assignments) a = rank[std::size_t(a)];
    return best;
}

double square_error(const PointSet& points, const std::vector<Point>& centers) {
    if (centers.empty()) throw ValidationError("square_error needs at least one center");
    double total = 0.0;
    for (const Point& p : points) {
        double best = std::numeric_limits<double>::infinity();
        for (const Point& c : centers) best = std::min(best, sq_dist(p, c));
        total += best;
    }
    return total;
}

}  // namespace gridclust
