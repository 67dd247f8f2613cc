#include "fnav/encoder.hpp"

#include <algorithm>
#include <limits>

namespace fnav {

LatentVector encode(const DepthImage& image, double max_range) {
  LatentVector latent;
  const int cell_w = image.width / LatentVector::kCols;
  const int cell_h = image.height / LatentVector::kRows;

  for (int row = 0; row < LatentVector::kRows; ++row) {
    const int v0 = row * cell_h;
    const int v1 = row + 1 == LatentVector::kRows ? image.height : v0 + cell_h;
    for (int col = 0; col < LatentVector::kCols; ++col) {
      const int u0 = col * cell_w;
      const int u1 = col + 1 == LatentVector::kCols ? image.width : u0 + cell_w;
      float best = std::numeric_limits<float>::infinity();
      for (int v = v0; v < v1; ++v)
        for (int u = u0; u < u1; ++u) {
          const float value = image.at(u, v);
          if (DepthImage::defined(value)) best = std::min(best, value);
        }
      const double normalized = best == std::numeric_limits<float>::infinity()
                                    ? 1.0
                                    : std::clamp(static_cast<double>(best) / max_range, 0.0, 1.0);
      latent.values[static_cast<std::size_t>(row) * LatentVector::kCols + col] = normalized;
    }
  }
  return latent;
}

}  // namespace fnav
