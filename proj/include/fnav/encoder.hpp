#pragma once

#include <array>

#include "fnav/depth_image.hpp"

namespace fnav {

// 128-value latent summary of a depth frame: an 8x16 cell grid, each cell
// holding the normalized minimum defined range inside it. Near obstacles
// dominate a cell; empty cells read as far (1.0). Stands in for a trained
// encoder behind the same interface.
struct LatentVector {
  static constexpr int kRows = 8;
  static constexpr int kCols = 16;
  static constexpr int kSize = kRows * kCols;

  std::array<double, kSize> values{};

  double at(int row, int col) const { return values[static_cast<std::size_t>(row) * kCols + col]; }
};

LatentVector encode(const DepthImage& image, double max_range);

}  // namespace fnav
