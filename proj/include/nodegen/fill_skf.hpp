#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "nodegen/domain.hpp"
#include "nodegen/rng.hpp"
#include "nodegen/spacing.hpp"
#include "nodegen/spatial.hpp"

namespace nodegen {

// Bounding box aligned with the principal directions of a point cloud.
template <std::size_t dim>
struct OrientedBox {
    Vec<dim> center{};
    Eigen::Matrix<double, dim, dim> axes;  // columns = principal directions, orthonormal
    Vec<dim> half_extents{};

    Vec<dim> to_local(const Vec<dim>& p) const {
        Vec<dim> l;
        for (std::size_t i = 0; i < dim; ++i) {
            double s = 0;
            for (std::size_t j = 0; j < dim; ++j) s += axes(j, i) * (p[j] - center[j]);
            l[i] = s;
        }
        return l;
    }

    Vec<dim> to_world(const Vec<dim>& l) const {
        Vec<dim> p = center;
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j) p[j] += axes(j, i) * l[i];
        return p;
    }

    bool contains_local(const Vec<dim>& l) const {
        for (std::size_t i = 0; i < dim; ++i)
            if (std::abs(l[i]) > half_extents[i]) return false;
        return true;
    }

    double volume() const {
        double v = 1;
        for (std::size_t i = 0; i < dim; ++i) v *= 2 * half_extents[i];
        return v;
    }
};

// Oriented bounding box via principal component analysis: axes are the
// eigenvectors of the point covariance matrix, extents the min/max
// projections onto them.
template <std::size_t dim>
OrientedBox<dim> pca_obb(const std::vector<Vec<dim>>& points) {
    if (points.size() < dim + 1)
        throw std::invalid_argument("pca_obb: need at least dim + 1 points");

    Eigen::Matrix<double, dim, 1> mean = Eigen::Matrix<double, dim, 1>::Zero();
    for (const Vec<dim>& p : points)
        for (std::size_t i = 0; i < dim; ++i) mean(i) += p[i];
    mean /= static_cast<double>(points.size());

    Eigen::Matrix<double, dim, dim> cov = Eigen::Matrix<double, dim, dim>::Zero();
    for (const Vec<dim>& p : points) {
        Eigen::Matrix<double, dim, 1> d;
        for (std::size_t i = 0; i < dim; ++i) d(i) = p[i] - mean(i);
        cov += d * d.transpose();
    }
    cov /= static_cast<double>(points.size());

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, dim, dim>> es(cov);
    if (es.info() != Eigen::Success) throw std::runtime_error("pca_obb: eigendecomposition failed");
    double max_ev = es.eigenvalues().maxCoeff();
    for (std::size_t i = 0; i < dim; ++i) {
        if (es.eigenvalues()(i) < 1e-24 * std::max(max_ev, 1e-300)) {
            std::ostringstream os;
            os << "pca_obb: points are degenerate along direction ("
               << es.eigenvectors().col(i).transpose() << ")";
            throw std::invalid_argument(os.str());
        }
    }

    OrientedBox<dim> box;
    box.axes = es.eigenvectors();

    Vec<dim> pmin, pmax;
    pmin.fill(std::numeric_limits<double>::infinity());
    pmax.fill(-std::numeric_limits<double>::infinity());
    for (const Vec<dim>& p : points) {
        for (std::size_t i = 0; i < dim; ++i) {
            double proj = 0;
            for (std::size_t j = 0; j < dim; ++j) proj += box.axes(j, i) * (p[j] - mean(j));
            pmin[i] = std::min(pmin[i], proj);
            pmax[i] = std::max(pmax[i], proj);
        }
    }
    for (std::size_t j = 0; j < dim; ++j) {
        box.center[j] = mean(j);
        for (std::size_t i = 0; i < dim; ++i) box.center[j] += box.axes(j, i) * 0.5 * (pmin[i] + pmax[i]);
    }
    for (std::size_t i = 0; i < dim; ++i) {
        box.half_extents[i] = 0.5 * (pmax[i] - pmin[i]);
        if (!(box.half_extents[i] > 0))
            throw std::invalid_argument("pca_obb: zero extent along a principal direction");
    }
    return box;
}

// Poisson disk sampling of the oriented box after Bridson: an active-list
// loop draws up to n uniform random candidates in the annulus [h, 2h] around
// an active sample, keeps the first acceptable one (inside the box, no
// existing sample within h, checked on a background grid with cell size
// h/sqrt(d)) and retires the sample after n consecutive failures. Returned
// points are in world coordinates; spacing >= h holds exactly.
template <std::size_t dim>
std::vector<Vec<dim>> bridson_pds(const OrientedBox<dim>& box, double h, int n, Rng& rng) {
    if (!(h > 0)) throw std::invalid_argument("bridson_pds: h must be > 0");
    if (n < 1) throw std::invalid_argument("bridson_pds: n must be >= 1");

    Vec<dim> lo, hi;
    for (std::size_t i = 0; i < dim; ++i) {
        lo[i] = -box.half_extents[i];
        hi[i] = box.half_extents[i];
    }
    BackgroundGrid<dim> grid(lo, hi, h);
    std::vector<Vec<dim>> samples;    // local coordinates
    std::vector<std::size_t> active;  // indices into samples

    Vec<dim> first;
    for (std::size_t i = 0; i < dim; ++i) first[i] = rng.uniform(lo[i], hi[i]);
    samples.push_back(first);
    grid.insert(first);
    active.push_back(0);

    const double h2 = h * h;
    const double annulus_pow = std::pow(2.0, dim) - 1.0;
    while (!active.empty()) {
        std::size_t slot = rng.index(active.size());
        std::size_t i = active[slot];
        bool found = false;
        for (int attempt = 0; attempt < n; ++attempt) {
            // radius distribution uniform by annulus volume
            double r = h * std::pow(1.0 + annulus_pow * rng.uniform(), 1.0 / dim);
            Vec<dim> c = samples[i] + r * rng.sphere_dir<dim>();
            bool outside = false;
            for (std::size_t k = 0; k < dim; ++k)
                if (std::abs(c[k]) > box.half_extents[k]) {
                    outside = true;
                    break;
                }
            if (outside) continue;
            if (grid.nearest(c).dist2 < h2) continue;
            active.push_back(samples.size());
            grid.insert(c);
            samples.push_back(c);
            found = true;
            break;
        }
        if (!found) {
            active[slot] = active.back();
            active.pop_back();
        }
    }

    std::vector<Vec<dim>> world;
    world.reserve(samples.size());
    for (const Vec<dim>& s : samples) world.push_back(box.to_world(s));
    return world;
}

// Interior fill after Shankar, Kirby and Fogelson: boundary points are moved
// h toward the interior, an OBB of the shifted points is Poisson-disk
// sampled, and samples are kept only if they lie on the inner side of the
// half-spaces of nearby shifted boundary points (all shifted points within
// 2h take part; any boundary node closer than h to a sample has its shifted
// twin within that radius, which preserves the >= h spacing guarantee at
// corners). Returns the boundary nodes first, then the accepted samples.
template <std::size_t dim>
std::vector<Vec<dim>> skf_fill(const Domain<dim>& domain, const SpacingField<dim>& h,
                               const BoundaryDiscretization<dim>& boundary, int n, Rng& rng) {
    (void)domain;  // the fill is driven purely by the boundary and its normals
    if (!h.is_constant())
        throw std::invalid_argument("skf_fill: variable nodal spacing is not supported");
    if (boundary.points.empty()) throw std::invalid_argument("skf_fill: boundary required");
    const double hc = h.const_value;

    std::vector<Vec<dim>> shifted(boundary.points.size());
    for (std::size_t i = 0; i < boundary.points.size(); ++i)
        shifted[i] = boundary.points[i] - hc * boundary.normals[i];

    OrientedBox<dim> obb = pca_obb(shifted);
    std::vector<Vec<dim>> samples = bridson_pds(obb, hc, n, rng);

    KdTree<dim> tree(shifted);
    std::vector<Vec<dim>> out = boundary.points;
    for (const Vec<dim>& q : samples) {
        NearestHit nearest = tree.nearest(q);
        bool inside = dot(q - shifted[static_cast<std::size_t>(nearest.index)],
                          boundary.normals[static_cast<std::size_t>(nearest.index)]) <= 0;
        if (inside) {
            for (const NearestHit& hit : tree.radius_search(q, 2 * hc)) {
                std::size_t b = static_cast<std::size_t>(hit.index);
                if (dot(q - shifted[b], boundary.normals[b]) > 0) {
                    inside = false;
                    break;
                }
            }
        }
        if (inside) out.push_back(q);
    }
    return out;
}

}  // namespace nodegen
