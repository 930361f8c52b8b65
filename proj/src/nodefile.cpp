#include "nodegen/nodefile.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <json.hpp>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace nodegen {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

void write_node_file(std::ostream& out, const NodeFile& file) {
    nlohmann::json header{
        {"dim", file.dim},
        {"count", file.count()},
        {"algorithm", file.algorithm},
        {"h", file.h_spec},
        {"domain", file.domain_spec},
        {"seed", file.seed},
        {"seed_count", file.seed_count},
        {"truncated", file.truncated},
        {"has_beta", file.has_beta},
        {"terminal", file.terminal},
    };
    out << "# " << header.dump() << "\n";
    std::size_t n = file.count();
    for (std::size_t i = 0; i < n; ++i) {
        for (int k = 0; k < file.dim; ++k) {
            if (k) out << ',';
            out << fmt17(file.coords[i * file.dim + k]);
        }
        if (file.has_beta) out << ',' << file.beta[i];
        out << '\n';
    }
}

void write_node_file(const std::string& path, const NodeFile& file) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
    write_node_file(f, file);
}

NodeFile read_node_file(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line.size() < 2 || line[0] != '#')
        throw std::runtime_error("node file: missing '#' header line");
    nlohmann::json header = nlohmann::json::parse(line.substr(1));

    NodeFile file;
    file.dim = header.at("dim").get<int>();
    if (file.dim < 1 || file.dim > 16) throw std::runtime_error("node file: bad dimension");
    file.algorithm = header.value("algorithm", "");
    file.h_spec = header.value("h", "");
    file.domain_spec = header.value("domain", "");
    file.seed = header.value("seed", std::uint64_t(0));
    file.seed_count = header.value("seed_count", std::size_t(0));
    file.truncated = header.value("truncated", false);
    file.has_beta = header.value("has_beta", false);
    file.terminal = header.value("terminal", std::vector<std::int64_t>{});
    std::size_t expected = header.at("count").get<std::size_t>();

    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream row(line);
        std::string cell;
        int col = 0;
        while (std::getline(row, cell, ',')) {
            if (col < file.dim) {
                double v = std::stod(cell);
                if (!std::isfinite(v)) throw std::runtime_error("node file: non-finite coordinate");
                file.coords.push_back(v);
            } else if (file.has_beta && col == file.dim) {
                file.beta.push_back(std::stoll(cell));
            }
            ++col;
        }
        if (col < file.dim) throw std::runtime_error("node file: short row '" + line + "'");
    }
    if (file.count() != expected)
        throw std::runtime_error("node file: header count " + std::to_string(expected) +
                                 " does not match " + std::to_string(file.count()) + " rows");
    if (file.has_beta && file.beta.size() != file.count())
        throw std::runtime_error("node file: predecessor column incomplete");
    return file;
}

NodeFile read_node_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path + "'");
    return read_node_file(f);
}

}  // namespace nodegen
