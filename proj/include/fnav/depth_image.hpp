#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace fnav {

// Range image in meters. 0 is the reserved "undefined" sentinel; every
// defined value is strictly positive. Values are Euclidean ray ranges,
// not z-depths.
struct DepthImage {
  int width = 0;
  int height = 0;
  std::vector<float> values;

  static constexpr float kUndefined = 0.0f;

  DepthImage() = default;
  DepthImage(int w, int h) : width(w), height(h), values(static_cast<std::size_t>(w) * h, kUndefined) {}

  float at(int u, int v) const { return values[static_cast<std::size_t>(v) * width + u]; }
  float& at(int u, int v) { return values[static_cast<std::size_t>(v) * width + u]; }

  static bool defined(float value) { return value > 0.0f; }
};

// 16-bit binary PGM in millimeters, 0 = undefined. Values above 65.535 m
// saturate; callers keep max_range well below that.
void save_depth_pgm(const DepthImage& image, const std::string& path);
DepthImage load_depth_pgm(const std::string& path);

}  // namespace fnav
