#pragma once

#include <cstdint>

#include "fnav/depth_image.hpp"

namespace fnav {

// Stereo-style degradation applied to rendered range images: multiplicative
// range noise, dropouts along depth discontinuities, loss of thin horizontal
// structure, and i.i.d. pixel dropout.
struct NoiseConfig {
  double range_noise_sigma = 0.01;   // fraction of depth
  int edge_dropout_px = 2;           // px around >0.5 m 4-neighbor jumps
  double thin_dropout_width_px = 3;  // defined runs at or below this width vanish
  double random_dropout_p = 0.02;
  std::uint64_t seed = 0;

  bool is_identity() const {
    return range_noise_sigma == 0.0 && edge_dropout_px == 0 && thin_dropout_width_px == 0.0 &&
           random_dropout_p == 0.0;
  }
};

DepthImage corrupt_depth(const DepthImage& image, const NoiseConfig& cfg, double max_range);

// Hole-filling pass: an undefined pixel whose kernel window contains a
// defined value closer than d_act takes the window minimum. Pixels far
// from obstacles stay undefined; defined pixels are never touched.
struct ImproveConfig {
  int kernel = 5;        // odd, >= 3
  double d_act = 2.0;    // m
  int max_passes = 3;
};

DepthImage improve_depth(const DepthImage& image, const ImproveConfig& cfg);

}  // namespace fnav
