#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fnav/camera.hpp"
#include "fnav/depth_image.hpp"
#include "fnav/primitives.hpp"

namespace fnav {

// Partition of the image into yaw x vertical angular sectors. Columns and
// rows are split into equal pixel blocks with the remainder assigned to
// the last sector.
struct SectorGrid {
  int n_yaw = 32;
  int n_z = 8;
  int width = 480;
  int height = 270;
  double hfov = 1.518;
  double vfov = 1.012;

  static SectorGrid from_camera(const CameraModel& camera) {
    SectorGrid grid;
    grid.width = camera.width;
    grid.height = camera.height;
    grid.hfov = camera.hfov;
    grid.vfov = camera.vfov;
    return grid;
  }

  double delta_yaw() const { return hfov / n_yaw; }
  double delta_z() const { return vfov / n_z; }
  int sector_of_column(int u) const { return std::min(n_yaw - 1, u / (width / n_yaw)); }
  int sector_of_row(int v) const { return std::min(n_z - 1, v / (height / n_z)); }
  int index(int i, int j) const { return j * n_yaw + i; }  // i: yaw, j: vertical
};

struct BlockedMask {
  int n_yaw = 0;
  int n_z = 0;
  std::vector<std::uint8_t> raw;
  std::vector<std::uint8_t> expanded;
  std::vector<double> sector_min_depth;  // +inf where unblocked

  bool raw_at(int i, int j) const { return raw[static_cast<std::size_t>(j) * n_yaw + i] != 0; }
  bool expanded_at(int i, int j) const {
    return expanded[static_cast<std::size_t>(j) * n_yaw + i] != 0;
  }
};

struct SupervisorConfig {
  double d_min = 2.0;       // m, minimum safety distance
  // Below one pixel per sector: any defined return inside d_min blocks.
  // Thin branches can legitimately occupy a handful of pixels.
  double epsilon = 0.001;
  // Planar and vertical margins cover the physical radius plus the
  // first-order tracking lag (~v * tau_v), not just the body.
  double r = 0.5;           // m
  double h_margin = 0.5;    // m
  double lookahead = 1.0;   // s, swept-bearing horizon for action filtering
};

// Raw occupancy: a sector blocks when the fraction of its pixels that are
// defined and closer than d_min exceeds epsilon. Undefined pixels count
// only in the denominator.
BlockedMask compute_blocked(const DepthImage& depth, const SectorGrid& grid,
                            const SupervisorConfig& cfg);

// Dilates each blocked sector by the angular span a drone of radius r
// (height h_margin) subtends at that sector's obstacle distance. Clamped
// at the grid edges; the FOV is not panoramic so nothing wraps.
void expand_margins(BlockedMask& mask, const SectorGrid& grid, const SupervisorConfig& cfg);

struct SafeActionSet {
  std::vector<std::uint8_t> safe;  // per primitive index
  int count = 0;

  bool contains(std::size_t index) const { return index < safe.size() && safe[index] != 0; }
};

// A primitive is safe when the bearings of all its waypoints up to the
// lookahead time land in unexpanded sectors; bearings outside the FOV are
// excluded outright.
SafeActionSet filter_actions(const BlockedMask& mask, const std::vector<MotionPrimitive>& library,
                             const SectorGrid& grid, double lookahead);

// Sector (i, j) of a body-frame point's bearing for the forward-looking
// camera (azimuth left-positive maps to decreasing i), or (-1, -1) when
// the bearing falls outside the FOV.
std::pair<int, int> bearing_sector(const Vec3& body_point, const SectorGrid& grid);

// Text rendering of raw/expanded masks with an optional selected sector,
// one grid row per line ('.' free, '#' raw, '+' expansion, '*' selected).
std::string format_mask(const BlockedMask& mask, int selected_i = -1, int selected_j = -1);

}  // namespace fnav
