#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace nodegen {

// 8-bit grayscale raster, row 0 at the top.
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;  // row-major, height*width entries

    std::uint8_t at(int row, int col) const { return pixels[static_cast<std::size_t>(row) * width + col]; }
    bool empty() const { return width == 0 || height == 0; }
};

// Portable graymap, ASCII (P2) or binary (P5), maxval 255.
GrayImage load_pgm(std::istream& in);
GrayImage load_pgm_file(const std::string& path);
void save_pgm(std::ostream& out, const GrayImage& img, bool binary = true);

}  // namespace nodegen
