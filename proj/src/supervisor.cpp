#include "fnav/supervisor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fnav {

BlockedMask compute_blocked(const DepthImage& depth, const SectorGrid& grid,
                            const SupervisorConfig& cfg) {
  BlockedMask mask;
  mask.n_yaw = grid.n_yaw;
  mask.n_z = grid.n_z;
  const std::size_t n_sectors = static_cast<std::size_t>(grid.n_yaw) * grid.n_z;
  mask.raw.assign(n_sectors, 0);
  mask.expanded.assign(n_sectors, 0);
  mask.sector_min_depth.assign(n_sectors, std::numeric_limits<double>::infinity());

  std::vector<int> obstacle_count(n_sectors, 0);
  std::vector<int> total_count(n_sectors, 0);
  const float d_min = static_cast<float>(cfg.d_min);

  for (int v = 0; v < depth.height; ++v) {
    const int j = grid.sector_of_row(v);
    for (int u = 0; u < depth.width; ++u) {
      const std::size_t s = static_cast<std::size_t>(grid.index(grid.sector_of_column(u), j));
      ++total_count[s];
      const float value = depth.at(u, v);
      if (DepthImage::defined(value) && value < d_min) {
        ++obstacle_count[s];
        mask.sector_min_depth[s] = std::min(mask.sector_min_depth[s], static_cast<double>(value));
      }
    }
  }

  for (std::size_t s = 0; s < n_sectors; ++s) {
    const bool blocked =
        static_cast<double>(obstacle_count[s]) / static_cast<double>(total_count[s]) > cfg.epsilon;
    mask.raw[s] = blocked ? 1 : 0;
    if (!blocked) mask.sector_min_depth[s] = std::numeric_limits<double>::infinity();
  }
  return mask;
}

void expand_margins(BlockedMask& mask, const SectorGrid& grid, const SupervisorConfig& cfg) {
  mask.expanded = mask.raw;
  for (int j = 0; j < grid.n_z; ++j) {
    for (int i = 0; i < grid.n_yaw; ++i) {
      const std::size_t s = static_cast<std::size_t>(grid.index(i, j));
      if (!mask.raw[s]) continue;
      const double d = mask.sector_min_depth[s];
      const int m_yaw = static_cast<int>(std::ceil(std::atan(cfg.r / d) / grid.delta_yaw()));
      const int m_z = static_cast<int>(std::ceil(std::atan(cfg.h_margin / 2.0 / d) / grid.delta_z()));
      const int i0 = std::max(0, i - m_yaw), i1 = std::min(grid.n_yaw - 1, i + m_yaw);
      const int j0 = std::max(0, j - m_z), j1 = std::min(grid.n_z - 1, j + m_z);
      for (int jj = j0; jj <= j1; ++jj)
        for (int ii = i0; ii <= i1; ++ii)
          mask.expanded[static_cast<std::size_t>(grid.index(ii, jj))] = 1;
    }
  }
}

std::pair<int, int> bearing_sector(const Vec3& body_point, const SectorGrid& grid) {
  if (body_point.x() <= 0.0) return {-1, -1};
  // Camera frame for the forward mount: x_cam = -y, y_cam = -z, z_cam = x.
  const double azimuth = std::atan2(-body_point.y(), body_point.x());
  const double elevation = std::atan2(-body_point.z(), body_point.x());
  const double half_h = grid.hfov / 2.0;
  const double half_v = grid.vfov / 2.0;
  if (azimuth < -half_h || azimuth >= half_h || elevation < -half_v || elevation >= half_v)
    return {-1, -1};
  const int i = std::min(grid.n_yaw - 1, static_cast<int>((azimuth + half_h) / grid.delta_yaw()));
  const int j = std::min(grid.n_z - 1, static_cast<int>((elevation + half_v) / grid.delta_z()));
  return {i, j};
}

SafeActionSet filter_actions(const BlockedMask& mask, const std::vector<MotionPrimitive>& library,
                             const SectorGrid& grid, double lookahead) {
  SafeActionSet set;
  set.safe.assign(library.size(), 0);
  for (std::size_t p = 0; p < library.size(); ++p) {
    // The lateral coupling bends the path, so the bearing the drone
    // actually sweeps is not the endpoint bearing alone: every waypoint
    // up to the lookahead time must land in a free sector.
    bool safe = true;
    bool reached_lookahead = false;
    for (const Waypoint& wp : library[p].waypoints) {
      if (wp.t == 0.0) continue;
      if (wp.t > lookahead + 1e-9) break;
      const auto [i, j] = bearing_sector(wp.position, grid);
      if (i < 0 || mask.expanded_at(i, j)) {  // out of FOV is conservatively unsafe
        safe = false;
        break;
      }
      if (wp.t >= lookahead - 1e-9) reached_lookahead = true;
    }
    if (safe && reached_lookahead) {
      set.safe[p] = 1;
      ++set.count;
    }
  }
  return set;
}

std::string format_mask(const BlockedMask& mask, int selected_i, int selected_j) {
  std::string out;
  out.reserve(static_cast<std::size_t>(mask.n_z) * (mask.n_yaw + 1));
  for (int j = 0; j < mask.n_z; ++j) {
    for (int i = 0; i < mask.n_yaw; ++i) {
      char c = '.';
      if (mask.expanded_at(i, j)) c = mask.raw_at(i, j) ? '#' : '+';
      if (i == selected_i && j == selected_j) c = '*';
      out.push_back(c);
    }
    out.push_back('\n');
  }
  return out;
}

}  // namespace fnav
