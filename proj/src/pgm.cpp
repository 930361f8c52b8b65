#include "nodegen/pgm.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace nodegen {

namespace {

// Reads the next whitespace-separated token, skipping '#' comments.
std::string next_token(std::istream& in) {
    std::string tok;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {
            }
            continue;
        }
        if (std::isspace(c)) {
            if (!tok.empty()) return tok;
            continue;
        }
        tok.push_back(static_cast<char>(c));
    }
    return tok;
}

int next_int(std::istream& in, const char* what) {
    std::string tok = next_token(in);
    if (tok.empty()) throw std::runtime_error(std::string("pgm: missing ") + what);
    return std::stoi(tok);
}

}  // namespace

GrayImage load_pgm(std::istream& in) {
    std::string magic = next_token(in);
    if (magic != "P2" && magic != "P5") throw std::runtime_error("pgm: expected P2 or P5, got '" + magic + "'");
    GrayImage img;
    img.width = next_int(in, "width");
    img.height = next_int(in, "height");
    int maxval = next_int(in, "maxval");
    if (img.width <= 0 || img.height <= 0) throw std::runtime_error("pgm: non-positive dimensions");
    if (maxval != 255) throw std::runtime_error("pgm: maxval must be 255, got " + std::to_string(maxval));
    std::size_t n = static_cast<std::size_t>(img.width) * img.height;
    img.pixels.resize(n);
    if (magic == "P5") {
        // single whitespace byte after maxval, then raw bytes
        in.read(reinterpret_cast<char*>(img.pixels.data()), static_cast<std::streamsize>(n));
        if (static_cast<std::size_t>(in.gcount()) != n) throw std::runtime_error("pgm: truncated P5 payload");
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            int v = next_int(in, "pixel");
            if (v < 0 || v > 255) throw std::runtime_error("pgm: pixel out of range");
            img.pixels[i] = static_cast<std::uint8_t>(v);
        }
    }
    return img;
}

GrayImage load_pgm_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("pgm: cannot open '" + path + "'");
    return load_pgm(f);
}

void save_pgm(std::ostream& out, const GrayImage& img, bool binary) {
    out << (binary ? "P5" : "P2") << "\n" << img.width << " " << img.height << "\n255\n";
    if (binary) {
        out.write(reinterpret_cast<const char*>(img.pixels.data()),
                  static_cast<std::streamsize>(img.pixels.size()));
    } else {
        for (int r = 0; r < img.height; ++r) {
            for (int c = 0; c < img.width; ++c) out << int(img.at(r, c)) << (c + 1 == img.width ? "" : " ");
            out << "\n";
        }
    }
}

}  // namespace nodegen
