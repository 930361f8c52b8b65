#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "nodegen/vec.hpp"

namespace nodegen {

// On-disk node set: one '#'-prefixed JSON header line, then CSV rows of d
// coordinates (plus the predecessor index when present). Floating-point
// values are written with 17 significant digits so payloads round-trip
// bit-exactly.
struct NodeFile {
    int dim = 2;
    std::string algorithm;
    std::string h_spec;
    std::string domain_spec;
    std::uint64_t seed = 0;
    std::size_t seed_count = 0;
    bool truncated = false;
    bool has_beta = false;

    std::vector<double> coords;           // count * dim, row-major
    std::vector<std::int64_t> beta;       // count entries when has_beta, -1 for seeds
    std::vector<std::int64_t> terminal;   // indices of terminal nodes, optional

    std::size_t count() const { return dim == 0 ? 0 : coords.size() / static_cast<std::size_t>(dim); }

    template <std::size_t d>
    std::vector<Vec<d>> points() const {
        std::vector<Vec<d>> pts(count());
        for (std::size_t i = 0; i < pts.size(); ++i)
            for (std::size_t k = 0; k < d; ++k) pts[i][k] = coords[i * d + k];
        return pts;
    }

    template <std::size_t d>
    void set_points(const std::vector<Vec<d>>& pts) {
        dim = d;
        coords.resize(pts.size() * d);
        for (std::size_t i = 0; i < pts.size(); ++i)
            for (std::size_t k = 0; k < d; ++k) coords[i * d + k] = pts[i][k];
    }
};

void write_node_file(std::ostream& out, const NodeFile& file);
void write_node_file(const std::string& path, const NodeFile& file);
NodeFile read_node_file(std::istream& in);
NodeFile read_node_file(const std::string& path);

}  // namespace nodegen
