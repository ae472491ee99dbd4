#ifndef GELID_IMAGE_HPP
#define GELID_IMAGE_HPP

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "gelid/types.hpp"

namespace gelid {

// 8-bit RGB image, row-major interleaved.
struct Frame {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;  // size = 3 * width * height

  std::uint8_t& at(int row, int col, int channel) {
    return rgb[3 * (static_cast<size_t>(row) * width + col) + channel];
  }
  std::uint8_t at(int row, int col, int channel) const {
    return rgb[3 * (static_cast<size_t>(row) * width + col) + channel];
  }

  static Frame constant(int width, int height, std::uint8_t r, std::uint8_t g, std::uint8_t b);
};

Frame read_png(const std::string& path);
void write_png(const Frame& frame, const std::string& path);

// Reads only the IHDR chunk; cheap dimension probe for bundle validation.
std::pair<int, int> png_dimensions(const std::string& path);

// Rec.601 luma: 0.299 R + 0.587 G + 0.114 B, kept as doubles in [0, 255].
Eigen::MatrixXd luma(const Frame& frame);

}  // namespace gelid

#endif
