#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "nodegen/domain.hpp"
#include "nodegen/spacing.hpp"
#include "nodegen/spatial.hpp"

namespace nodegen {

// Advancing-front box fill (two-dimensional only). Seeds the bottom edge of
// the box with points spaced by h, then repeatedly accepts the candidate with
// minimal y, removes candidates closer than h to it and inserts n new
// candidates on the circular arc of radius h about the accepted point,
// spanning from the nearest surviving candidate on the left to the nearest
// on the right. The candidate list is kept ordered by x throughout.
inline std::vector<Vec<2>> ff_fill_box(double xmin, double xmax, double ymin, double ymax,
                                       const SpacingField<2>& h, int n) {
    if (!(xmin < xmax && ymin < ymax)) throw std::invalid_argument("ff_fill_box: degenerate box");
    if (n < 1) throw std::invalid_argument("ff_fill_box: n must be >= 1");

    std::vector<Vec<2>> pts;
    std::vector<Vec<2>> candidates;

    {
        auto point_at = [&](double t) { return Vec<2>{xmin + t, ymin}; };
        auto h_at = [&](const Vec<2>& p) {
            double v = h(p);
            if (!(v > 0)) throw std::domain_error("ff_fill_box: h must be strictly positive");
            return v;
        };
        for (double t : detail::walk_ticks(xmax - xmin, point_at, h_at)) candidates.push_back(point_at(t));
    }

    auto x_less = [](const Vec<2>& a, double x) { return a[0] < x; };

    while (!candidates.empty()) {
        std::size_t imin = 0;
        for (std::size_t i = 1; i < candidates.size(); ++i)
            if (candidates[i][1] < candidates[imin][1]) imin = i;
        Vec<2> p = candidates[imin];
        if (p[1] > ymax) break;
        pts.push_back(p);

        double hp = h(p);
        if (!(hp > 0)) throw std::domain_error("ff_fill_box: h must be strictly positive");

        // remove candidates closer than h(p), p itself included
        auto first = std::lower_bound(candidates.begin(), candidates.end(), p[0] - hp, x_less);
        auto last = std::lower_bound(candidates.begin(), candidates.end(), p[0] + hp, x_less);
        auto kept = std::remove_if(first, last,
                                   [&](const Vec<2>& c) { return dist2(c, p) < hp * hp; });
        candidates.erase(kept, last);

        // nearest survivors left and right of p; a missing survivor extends
        // the arc to the box wall direction
        auto right = std::lower_bound(candidates.begin(), candidates.end(), p[0], x_less);
        double theta_left = M_PI, theta_right = 0.0;
        if (right != candidates.end()) theta_right = std::atan2((*right)[1] - p[1], (*right)[0] - p[0]);
        if (right != candidates.begin()) {
            const Vec<2>& left = *(right - 1);
            theta_left = std::atan2(left[1] - p[1], left[0] - p[0]);
        }
        if (theta_left <= theta_right) theta_left += 2.0 * M_PI;

        // n new candidates equispaced strictly between the two angles
        for (int j = 1; j <= n; ++j) {
            double theta = theta_right + j * (theta_left - theta_right) / (n + 1);
            Vec<2> c{p[0] + hp * std::cos(theta), p[1] + hp * std::sin(theta)};
            if (c[0] < xmin || c[0] > xmax || c[1] < ymin) continue;
            auto pos = std::lower_bound(candidates.begin(), candidates.end(), c[0], x_less);
            candidates.insert(pos, c);
        }
    }
    return pts;
}

// Irregular-domain wrapper: fill the bounding box, discard nodes outside the
// domain, superimpose the boundary discretization and drop interior nodes
// whose closest boundary node p is less than h(p)/2 away. Returns the
// boundary nodes first, then the surviving interior nodes.
inline std::vector<Vec<2>> ff_fill_domain(const Domain<2>& domain, const SpacingField<2>& h, int n,
                                          const BoundaryDiscretization<2>& boundary) {
    std::vector<Vec<2>> box_nodes =
        ff_fill_box(domain.lo[0], domain.hi[0], domain.lo[1], domain.hi[1], h, n);

    std::vector<Vec<2>> out = boundary.points;
    if (boundary.points.empty()) {
        for (const Vec<2>& q : box_nodes)
            if (domain.contains(q)) out.push_back(q);
        return out;
    }

    KdTree<2> boundary_tree(boundary.points);
    for (const Vec<2>& q : box_nodes) {
        if (!domain.contains(q)) continue;
        NearestHit hit = boundary_tree.nearest(q);
        double hb = h(boundary.points[static_cast<std::size_t>(hit.index)]);
        if (hit.dist2 < 0.25 * hb * hb) continue;
        out.push_back(q);
    }
    return out;
}

}  // namespace nodegen
