#pragma once

#include <cstdint>
#include <vector>

#include "nodegen/vec.hpp"

namespace nodegen {

struct Triangle {
    std::int32_t a, b, c;  // indices into the input points, counterclockwise
};

// Delaunay triangulation of a 2-D point set (Bowyer-Watson with a super
// triangle). Throws std::invalid_argument for fewer than 3 points or an
// all-collinear set. Exactly cocircular configurations resolve to an
// arbitrary diagonal, which leaves the circumcenters unchanged.
std::vector<Triangle> delaunay_triangulate(const std::vector<Vec<2>>& points);

// Circumcenter of a triangle; the triangle must not be degenerate.
Vec<2> circumcenter(const Vec<2>& a, const Vec<2>& b, const Vec<2>& c);

}  // namespace nodegen
