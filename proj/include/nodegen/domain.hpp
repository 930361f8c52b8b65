#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <vector>

#include "nodegen/rng.hpp"
#include "nodegen/spacing.hpp"
#include "nodegen/vec.hpp"

namespace nodegen {

// Boundary discretization of a domain: points on the boundary with matching
// outward unit normals, neighboring points spaced approximately h apart.
template <std::size_t dim>
struct BoundaryDiscretization {
    std::vector<Vec<dim>> points;
    std::vector<Vec<dim>> normals;

    std::size_t size() const { return points.size(); }
};

// Implicit d-dimensional region given by its characteristic function and a
// bounding box. Immutable after construction; safe to query concurrently.
//
// `inside` is the closed region (boundary points count as inside, so boundary
// discretizations are valid fill seeds); `inside_open` is the strict
// interior, used when this domain is subtracted from another.
template <std::size_t dim>
struct Domain {
    static constexpr int dimension = dim;

    std::function<bool(const Vec<dim>&)> inside;
    std::function<bool(const Vec<dim>&)> inside_open;
    Vec<dim> lo{};
    Vec<dim> hi{};
    double volume_hint = -1;  // < 0 when unknown
    std::function<BoundaryDiscretization<dim>(const SpacingField<dim>&)> boundary_sampler;

    bool contains(const Vec<dim>& p) const {
        for (std::size_t i = 0; i < dim; ++i)
            if (p[i] < lo[i] || p[i] > hi[i]) return false;
        return inside(p);
    }
};

namespace detail {

template <std::size_t dim>
BoundaryDiscretization<dim> box_boundary(Vec<dim> lo, Vec<dim> hi, const SpacingField<dim>& h);
template <std::size_t dim>
BoundaryDiscretization<dim> ball_boundary(Vec<dim> center, double radius, const SpacingField<dim>& h);

}  // namespace detail

template <std::size_t dim>
Domain<dim> make_box(const Vec<dim>& lo, const Vec<dim>& hi) {
    for (std::size_t i = 0; i < dim; ++i)
        if (!(lo[i] < hi[i]))
            throw std::invalid_argument("make_box: degenerate box, lo must be < hi component-wise");
    Domain<dim> d;
    d.lo = lo;
    d.hi = hi;
    d.inside = [lo, hi](const Vec<dim>& p) {
        for (std::size_t i = 0; i < dim; ++i)
            if (p[i] < lo[i] || p[i] > hi[i]) return false;
        return true;
    };
    d.inside_open = [lo, hi](const Vec<dim>& p) {
        for (std::size_t i = 0; i < dim; ++i)
            if (p[i] <= lo[i] || p[i] >= hi[i]) return false;
        return true;
    };
    double v = 1;
    for (std::size_t i = 0; i < dim; ++i) v *= hi[i] - lo[i];
    d.volume_hint = v;
    d.boundary_sampler = [lo, hi](const SpacingField<dim>& h) {
        return detail::box_boundary<dim>(lo, hi, h);
    };
    return d;
}

template <std::size_t dim>
Domain<dim> make_ball(const Vec<dim>& center, double radius) {
    if (!(radius > 0)) throw std::invalid_argument("make_ball: radius must be > 0");
    Domain<dim> d;
    for (std::size_t i = 0; i < dim; ++i) {
        d.lo[i] = center[i] - radius;
        d.hi[i] = center[i] + radius;
    }
    double r2 = radius * radius;
    d.inside = [center, r2](const Vec<dim>& p) { return dist2(p, center) <= r2; };
    d.inside_open = [center, r2](const Vec<dim>& p) { return dist2(p, center) < r2; };
    d.volume_hint = std::pow(M_PI, dim / 2.0) / std::tgamma(dim / 2.0 + 1.0) * std::pow(radius, dim);
    d.boundary_sampler = [center, radius](const SpacingField<dim>& h) {
        return detail::ball_boundary<dim>(center, radius, h);
    };
    return d;
}

// Set difference a \ int(b). The subtrahend is removed as an open set, so
// points on the boundary of the hole remain inside (closed domain).
template <std::size_t dim>
Domain<dim> difference(const Domain<dim>& a, const Domain<dim>& b) {
    Domain<dim> d;
    d.lo = a.lo;
    d.hi = a.hi;
    auto a_in = a.inside, a_open = a.inside_open;
    auto b_in = b.inside, b_open = b.inside_open;
    d.inside = [a_in, b_open](const Vec<dim>& p) { return a_in(p) && !b_open(p); };
    d.inside_open = [a_open, b_in](const Vec<dim>& p) { return a_open(p) && !b_in(p); };

    // Monte Carlo volume, for diagnostics and expected-count estimates.
    {
        Rng rng(0x9e3779b97f4a7c15ull);
        const long n = 100000;
        long in = 0;
        for (long s = 0; s < n; ++s) {
            Vec<dim> p;
            for (std::size_t i = 0; i < dim; ++i) p[i] = rng.uniform(d.lo[i], d.hi[i]);
            if (d.inside(p)) ++in;
        }
        double bbox_volume = 1;
        for (std::size_t i = 0; i < dim; ++i) bbox_volume *= d.hi[i] - d.lo[i];
        d.volume_hint = bbox_volume * static_cast<double>(in) / static_cast<double>(n);
    }

    auto a_sampler = a.boundary_sampler;
    auto b_sampler = b.boundary_sampler;
    if (a_sampler && b_sampler) {
        d.boundary_sampler = [a_sampler, b_sampler, a_in, b_open](const SpacingField<dim>& h) {
            BoundaryDiscretization<dim> bd;
            BoundaryDiscretization<dim> outer = a_sampler(h);
            for (std::size_t i = 0; i < outer.size(); ++i) {
                if (b_open(outer.points[i])) continue;
                bd.points.push_back(outer.points[i]);
                bd.normals.push_back(outer.normals[i]);
            }
            BoundaryDiscretization<dim> inner = b_sampler(h);
            for (std::size_t i = 0; i < inner.size(); ++i) {
                if (!a_in(inner.points[i])) continue;
                bd.points.push_back(inner.points[i]);
                bd.normals.push_back(-1.0 * inner.normals[i]);  // outward from a \ b
            }
            return bd;
        };
    }
    return d;
}

// Boundary of a canonical shape (box, ball, or a difference of such),
// discretized conforming to h: consecutive points are approximately h apart,
// normals point outward, box corners carry exactly one node.
template <std::size_t dim>
BoundaryDiscretization<dim> discretize_boundary(const Domain<dim>& domain,
                                                const SpacingField<dim>& h) {
    if (!domain.boundary_sampler)
        throw std::invalid_argument("discretize_boundary: domain has no parametrizable boundary");
    BoundaryDiscretization<dim> bd = domain.boundary_sampler(h);
    for (const auto& p : bd.points) {
        double hp = h(p);
        if (!(hp > 0))
            throw std::domain_error("discretize_boundary: h must be strictly positive on the boundary");
    }
    return bd;
}

namespace detail {

// Walks positions 0 = t_0 < t_1 < ... with step h(point(t)) until reaching
// length, then rounds the interval count to the nearest integer and rescales
// so the last position lands on `length` exactly. Returns interior tick
// positions plus both endpoints.
template <class PointAt, class HAt>
inline std::vector<double> walk_ticks(double length, const PointAt& point_at, const HAt& h_at) {
    std::vector<double> t{0.0};
    double pos = 0;
    while (pos < length) {
        double step = h_at(point_at(pos));
        if (!(step > 0)) throw std::domain_error("boundary walk: h must be strictly positive");
        step = std::min(step, length);  // never fewer than one interval
        pos += step;
        t.push_back(pos);
    }
    std::size_t k = t.size() - 1;  // interval count of the raw walk, t.back() >= length
    double frac = static_cast<double>(k - 1) + (length - t[k - 1]) / (t[k] - t[k - 1]);
    std::size_t m = static_cast<std::size_t>(std::max(1.0, std::round(frac)));
    if (m < k) t.pop_back();  // rounding down drops the overshooting tick
    double scale = length / t.back();
    for (double& v : t) v *= scale;
    t.back() = length;
    return t;
}

// Ticks along one box side. Constant spacing subdivides uniformly with every
// gap >= h (one interval fewer when rounding would land the gaps a hair
// below h, so downstream exact-spacing guarantees survive); variable spacing
// walks h adaptively.
template <std::size_t dim, class PointAt>
inline std::vector<double> side_ticks(double length, const PointAt& point_at,
                                      const SpacingField<dim>& h) {
    if (h.is_constant()) {
        double hc = h.const_value;
        if (!(hc > 0)) throw std::domain_error("boundary: h must be strictly positive");
        long m = std::max(1L, std::lround(length / hc));
        if (m >= 2 && length / static_cast<double>(m) < hc * (1.0 + 1e-12) &&
            length / static_cast<double>(m - 1) <= 1.49 * hc)
            --m;
        std::vector<double> t(m + 1);
        for (long i = 0; i <= m; ++i) t[i] = static_cast<double>(i) * length / static_cast<double>(m);
        t.back() = length;
        return t;
    }
    auto h_at = [&](const Vec<dim>& p) {
        double v = h(p);
        if (!(v > 0)) throw std::domain_error("boundary: h must be strictly positive");
        return v;
    };
    return walk_ticks(length, point_at, h_at);
}

// Deduplication key for points shared between box faces/edges.
template <std::size_t dim>
struct QuantKey {
    std::array<long long, dim> q;
    bool operator<(const QuantKey& o) const { return q < o.q; }
};

template <std::size_t dim>
QuantKey<dim> quantize(const Vec<dim>& p, double tol) {
    QuantKey<dim> k;
    for (std::size_t i = 0; i < dim; ++i) k.q[i] = static_cast<long long>(std::llround(p[i] / tol));
    return k;
}

template <std::size_t dim>
BoundaryDiscretization<dim> box_boundary(Vec<dim> lo, Vec<dim> hi, const SpacingField<dim>& h) {
    BoundaryDiscretization<dim> bd;
    if constexpr (dim == 1) {
        bd.points = {Vec<1>{lo[0]}, Vec<1>{hi[0]}};
        bd.normals = {Vec<1>{-1.0}, Vec<1>{1.0}};
        return bd;
    } else {
        double scale = 0;
        for (std::size_t i = 0; i < dim; ++i) scale = std::max(scale, hi[i] - lo[i]);
        std::map<QuantKey<dim>, std::size_t> seen;
        // Points shared between faces (edges, corners) get the average of the
        // adjacent face normals, normalized at the end.
        auto add = [&](const Vec<dim>& p, const Vec<dim>& n) {
            auto [it, fresh] = seen.emplace(quantize<dim>(p, 1e-9 * scale), bd.points.size());
            if (fresh) {
                bd.points.push_back(p);
                bd.normals.push_back(n);
            } else {
                bd.normals[it->second] = bd.normals[it->second] + n;
            }
        };

        // Each face is the tensor product of per-axis ticks; ticks are walked
        // through the face center so variable h is respected axis by axis.
        for (std::size_t axis = 0; axis < dim; ++axis) {
            for (int side = 0; side < 2; ++side) {
                double face_coord = side ? hi[axis] : lo[axis];
                Vec<dim> normal = zero_vec<dim>();
                normal[axis] = side ? 1.0 : -1.0;
                Vec<dim> center;
                for (std::size_t i = 0; i < dim; ++i) center[i] = 0.5 * (lo[i] + hi[i]);
                center[axis] = face_coord;

                std::array<std::vector<double>, dim> ticks;
                for (std::size_t u = 0; u < dim; ++u) {
                    if (u == axis) continue;
                    auto point_at = [&](double t) {
                        Vec<dim> p = center;
                        p[u] = lo[u] + t;
                        return p;
                    };
                    ticks[u] = side_ticks<dim>(hi[u] - lo[u], point_at, h);
                }

                // iterate the tensor product over the dim-1 free axes
                std::array<std::size_t, dim> idx{};
                while (true) {
                    Vec<dim> p;
                    p[axis] = face_coord;
                    for (std::size_t u = 0; u < dim; ++u)
                        if (u != axis) p[u] = lo[u] + ticks[u][idx[u]];
                    add(p, normal);
                    std::size_t u = 0;
                    for (; u < dim; ++u) {
                        if (u == axis) continue;
                        if (++idx[u] < ticks[u].size()) break;
                        idx[u] = 0;
                    }
                    if (u == dim) break;
                }
            }
        }
        for (Vec<dim>& n : bd.normals) n = (1.0 / norm(n)) * n;
        return bd;
    }
}

template <std::size_t dim>
BoundaryDiscretization<dim> ball_boundary(Vec<dim> center, double radius, const SpacingField<dim>& h) {
    BoundaryDiscretization<dim> bd;
    // Points are placed a few ulps inside the sphere so they satisfy the
    // closed `contains` exactly despite trigonometric roundoff.
    radius *= 1.0 - 1e-14;
    if constexpr (dim == 1) {
        bd.points = {Vec<1>{center[0] - radius}, Vec<1>{center[0] + radius}};
        bd.normals = {Vec<1>{-1.0}, Vec<1>{1.0}};
        return bd;
    } else if constexpr (dim == 2) {
        auto point_at = [&](double arc) {
            double phi = arc / radius;
            return Vec<2>{center[0] + radius * std::cos(phi), center[1] + radius * std::sin(phi)};
        };
        std::vector<double> ticks = walk_ticks(2 * M_PI * radius, point_at, h);
        ticks.pop_back();  // 2*pi duplicates 0
        for (double arc : ticks) {
            Vec<2> p = point_at(arc);
            double inv = 1.0 / radius;
            bd.points.push_back(p);
            bd.normals.push_back({(p[0] - center[0]) * inv, (p[1] - center[1]) * inv});
        }
        return bd;
    } else if constexpr (dim == 3) {
        // Latitude rings walked pole to pole; each ring discretized by arc
        // length. Poles are single nodes.
        auto at = [&](double theta, double phi) {
            return Vec<3>{center[0] + radius * std::sin(theta) * std::cos(phi),
                          center[1] + radius * std::sin(theta) * std::sin(phi),
                          center[2] + radius * std::cos(theta)};
        };
        auto add = [&](const Vec<3>& p) {
            double inv = 1.0 / radius;
            bd.points.push_back(p);
            bd.normals.push_back({(p[0] - center[0]) * inv, (p[1] - center[1]) * inv,
                                  (p[2] - center[2]) * inv});
        };
        auto meridian_at = [&](double arc) { return at(arc / radius, 0.0); };
        std::vector<double> lat = walk_ticks(M_PI * radius, meridian_at, h);
        add(at(0, 0));
        for (std::size_t i = 1; i + 1 < lat.size(); ++i) {
            double theta = lat[i] / radius;
            double ring_r = radius * std::sin(theta);
            auto ring_at = [&](double arc) { return at(theta, arc / ring_r); };
            std::vector<double> ring = walk_ticks(2 * M_PI * ring_r, ring_at, h);
            ring.pop_back();
            for (double arc : ring) add(at(theta, arc / ring_r));
        }
        add(at(M_PI, 0));
        return bd;
    } else {
        throw std::invalid_argument("ball_boundary: dimension > 3 not supported");
    }
}

}  // namespace detail

}  // namespace nodegen
