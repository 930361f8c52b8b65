#include "nodegen/delaunay.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <utility>

namespace nodegen {

namespace {

struct Edge {
    std::int32_t u, v;
    bool operator<(const Edge& o) const { return u != o.u ? u < o.u : v < o.v; }
};

Edge directed(std::int32_t u, std::int32_t v) { return Edge{u, v}; }

double orient2d(const Vec<2>& a, const Vec<2>& b, const Vec<2>& c) {
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
}

// splitmix64, used for the deterministic symbolic perturbation below
std::uint64_t hash64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// > 0 when p lies strictly inside the circumcircle of ccw triangle (a, b, c)
double incircle(const Vec<2>& a, const Vec<2>& b, const Vec<2>& c, const Vec<2>& p) {
    double ax = a[0] - p[0], ay = a[1] - p[1];
    double bx = b[0] - p[0], by = b[1] - p[1];
    double cx = c[0] - p[0], cy = c[1] - p[1];
    double a2 = ax * ax + ay * ay;
    double b2 = bx * bx + by * by;
    double c2 = cx * cx + cy * cy;
    return ax * (by * c2 - b2 * cy) - ay * (bx * c2 - b2 * cx) + a2 * (bx * cy - by * cx);
}

}  // namespace

Vec<2> circumcenter(const Vec<2>& a, const Vec<2>& b, const Vec<2>& c) {
    double d0x = b[0] - a[0], d0y = b[1] - a[1];
    double d1x = c[0] - a[0], d1y = c[1] - a[1];
    double cross = d0x * d1y - d0y * d1x;
    double d00 = d0x * d0x + d0y * d0y;
    double d11 = d1x * d1x + d1y * d1y;
    double ux = (d1y * d00 - d0y * d11) / (2.0 * cross);
    double uy = (d0x * d11 - d1x * d00) / (2.0 * cross);
    return {a[0] + ux, a[1] + uy};
}

std::vector<Triangle> delaunay_triangulate(const std::vector<Vec<2>>& points) {
    const std::int32_t n = static_cast<std::int32_t>(points.size());
    if (n < 3) throw std::invalid_argument("delaunay_triangulate: need at least 3 points");

    // normalize into O(1) coordinates for the predicates
    Vec<2> lo = points[0], hi = points[0];
    for (const Vec<2>& p : points) {
        lo[0] = std::min(lo[0], p[0]);
        lo[1] = std::min(lo[1], p[1]);
        hi[0] = std::max(hi[0], p[0]);
        hi[1] = std::max(hi[1], p[1]);
    }
    double extent = std::max({hi[0] - lo[0], hi[1] - lo[1], 1e-300});
    // Deterministic jitter of 1e-10 resolves exactly collinear/cocircular
    // inputs (boundary chains, grid-like sets); callers compute circumcenters
    // from the unperturbed coordinates.
    auto jitter = [](std::int32_t i, int axis) {
        return 1e-10 * (static_cast<double>(hash64(2 * static_cast<std::uint64_t>(i) + axis) >> 11) *
                            (1.0 / 9007199254740992.0) -
                        0.5);
    };
    std::vector<Vec<2>> pts(points.size() + 3);
    for (std::int32_t i = 0; i < n; ++i)
        pts[i] = {(points[i][0] - lo[0]) / extent + jitter(i, 0),
                  (points[i][1] - lo[1]) / extent + jitter(i, 1)};
    pts[n] = {-10.0, -10.0};
    pts[n + 1] = {11.0, -9.5};
    pts[n + 2] = {0.3, 12.0};

    std::vector<Triangle> tris{Triangle{n, n + 1, n + 2}};
    std::vector<Triangle> good;
    std::vector<Edge> cavity;

    for (std::int32_t i = 0; i < n; ++i) {
        const Vec<2>& p = pts[i];
        good.clear();
        cavity.clear();
        std::map<Edge, int> edge_count;
        for (const Triangle& t : tris) {
            if (incircle(pts[t.a], pts[t.b], pts[t.c], p) > 0) {
                ++edge_count[directed(t.a, t.b)];
                ++edge_count[directed(t.b, t.c)];
                ++edge_count[directed(t.c, t.a)];
            } else {
                good.push_back(t);
            }
        }
        // boundary of the cavity: directed edges whose reverse is absent
        for (const auto& [e, cnt] : edge_count) {
            (void)cnt;
            if (!edge_count.count(directed(e.v, e.u))) cavity.push_back(e);
        }
        tris.swap(good);
        for (const Edge& e : cavity) {
            Triangle t{e.u, e.v, i};
            if (orient2d(pts[t.a], pts[t.b], pts[t.c]) <= 0) std::swap(t.b, t.c);
            tris.push_back(t);
        }
    }

    std::vector<Triangle> real;
    for (const Triangle& t : tris)
        if (t.a < n && t.b < n && t.c < n) real.push_back(t);
    if (real.empty())
        throw std::invalid_argument("delaunay_triangulate: degenerate (collinear) point set");
    return real;
}

}  // namespace nodegen
