#include "fnav/depth_pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "fnav/rng.hpp"

namespace fnav {

DepthImage corrupt_depth(const DepthImage& image, const NoiseConfig& cfg, double max_range) {
  if (cfg.is_identity()) return image;

  const int width = image.width;
  const int height = image.height;
  DepthImage out = image;
  Rng rng(derive_seed(cfg.seed, 0x6e6f697365ULL));  // "noise"

  if (cfg.range_noise_sigma > 0.0) {
    for (float& value : out.values) {
      if (!DepthImage::defined(value)) continue;
      const double noisy = value * (1.0 + cfg.range_noise_sigma * rng.normal());
      value = static_cast<float>(std::clamp(noisy, 1e-3, max_range));
    }
  }

  // Edge dropout: pixels within edge_dropout_px (Chebyshev) of a >0.5 m
  // 4-neighbor discontinuity become undefined. An undefined neighbor also
  // counts as a discontinuity, matching boundary loss around silhouettes.
  if (cfg.edge_dropout_px > 0) {
    std::vector<char> edge(out.values.size(), 0);
    auto jump = [&](float a, float b) {
      if (!DepthImage::defined(a)) return false;
      if (!DepthImage::defined(b)) return true;
      return std::fabs(a - b) > 0.5f;
    };
    for (int v = 0; v < height; ++v)
      for (int u = 0; u < width; ++u) {
        const float value = out.at(u, v);
        if (!DepthImage::defined(value)) continue;
        const bool e = (u > 0 && jump(value, out.at(u - 1, v))) ||
                       (u + 1 < width && jump(value, out.at(u + 1, v))) ||
                       (v > 0 && jump(value, out.at(u, v - 1))) ||
                       (v + 1 < height && jump(value, out.at(u, v + 1)));
        edge[static_cast<std::size_t>(v) * width + u] = e ? 1 : 0;
      }
    // Chebyshev dilation of the edge mask, separable per axis.
    const int r = cfg.edge_dropout_px;
    std::vector<char> tmp(edge.size(), 0);
    for (int v = 0; v < height; ++v)
      for (int u = 0; u < width; ++u) {
        char any = 0;
        const int lo = std::max(0, u - r);
        const int hi = std::min(width - 1, u + r);
        for (int k = lo; k <= hi; ++k) any |= edge[static_cast<std::size_t>(v) * width + k];
        tmp[static_cast<std::size_t>(v) * width + u] = any;
      }
    for (int v = 0; v < height; ++v) {
      const int lo = std::max(0, v - r);
      const int hi = std::min(height - 1, v + r);
      for (int u = 0; u < width; ++u) {
        char any = 0;
        for (int k = lo; k <= hi; ++k) any |= tmp[static_cast<std::size_t>(k) * width + u];
        if (any) out.at(u, v) = DepthImage::kUndefined;
      }
    }
  }

  // Thin-structure loss: defined horizontal runs of width <= threshold.
  if (cfg.thin_dropout_width_px > 0.0) {
    for (int v = 0; v < height; ++v) {
      int u = 0;
      while (u < width) {
        if (!DepthImage::defined(out.at(u, v))) {
          ++u;
          continue;
        }
        int end = u;
        while (end < width && DepthImage::defined(out.at(end, v))) ++end;
        if (end - u <= cfg.thin_dropout_width_px)
          for (int k = u; k < end; ++k) out.at(k, v) = DepthImage::kUndefined;
        u = end;
      }
    }
  }

  if (cfg.random_dropout_p > 0.0) {
    for (float& value : out.values)
      if (rng.uniform() < cfg.random_dropout_p) value = DepthImage::kUndefined;
  }

  return out;
}

namespace {

constexpr float kFar = std::numeric_limits<float>::infinity();

// Border-clamped 3-tap erosions; half applications per axis compose into
// the (2*half+1)-square window minimum.
void erode3_rows(const float* src, float* dst, int width, int height) {
  for (int v = 0; v < height; ++v) {
    const float* s = src + static_cast<std::size_t>(v) * width;
    float* d = dst + static_cast<std::size_t>(v) * width;
    d[0] = std::min(s[0], s[1]);
    for (int u = 1; u + 1 < width; ++u) d[u] = std::min(std::min(s[u - 1], s[u]), s[u + 1]);
    d[width - 1] = std::min(s[width - 2], s[width - 1]);
  }
}

void erode3_cols(const float* src, float* dst, int width, int height) {
  for (int v = 0; v < height; ++v) {
    const float* above = src + static_cast<std::size_t>(std::max(0, v - 1)) * width;
    const float* mid = src + static_cast<std::size_t>(v) * width;
    const float* below = src + static_cast<std::size_t>(std::min(height - 1, v + 1)) * width;
    float* d = dst + static_cast<std::size_t>(v) * width;
    for (int u = 0; u < width; ++u) d[u] = std::min(std::min(above[u], mid[u]), below[u]);
  }
}

// Square window minimum with undefined treated as +inf. `tmp` and `dst`
// are image-sized scratch buffers.
void window_min(const std::vector<float>& src, std::vector<float>& tmp, std::vector<float>& dst,
                int width, int height, int half) {
  for (std::size_t i = 0; i < src.size(); ++i)
    dst[i] = DepthImage::defined(src[i]) ? src[i] : kFar;
  for (int pass = 0; pass < half; ++pass) {
    erode3_rows(dst.data(), tmp.data(), width, height);
    std::swap(dst, tmp);
  }
  for (int pass = 0; pass < half; ++pass) {
    erode3_cols(dst.data(), tmp.data(), width, height);
    std::swap(dst, tmp);
  }
}

}  // namespace

DepthImage improve_depth(const DepthImage& image, const ImproveConfig& cfg) {
  if (cfg.kernel < 3 || cfg.kernel % 2 == 0) throw std::invalid_argument("kernel must be odd and >= 3");
  if (!(cfg.d_act > 0.0)) throw std::invalid_argument("d_act must be positive");

  const int width = image.width;
  const int height = image.height;
  const int half = cfg.kernel / 2;
  const float d_act = static_cast<float>(cfg.d_act);

  DepthImage current = image;
  std::vector<float> tmp(current.values.size());
  std::vector<float> mins(current.values.size());

  for (int pass = 0; pass < cfg.max_passes; ++pass) {
    window_min(current.values, tmp, mins, width, height, half);
    bool changed = false;
    for (std::size_t i = 0; i < current.values.size(); ++i) {
      if (DepthImage::defined(current.values[i])) continue;
      const float m = mins[i];
      if (m < d_act) {  // a near-obstacle neighbor activates the fill
        current.values[i] = m;
        changed = true;
      }
    }
    if (!changed) break;
  }
  return current;
}

}  // namespace fnav
