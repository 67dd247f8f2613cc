#pragma once

#include <vector>

#include "fnav/math_utils.hpp"

namespace fnav {

struct VelocityCommand {
  double vx = 0.0;        // m/s forward
  double vy = 0.0;        // m/s lateral, left positive
  double vz = 0.0;        // m/s up positive
  double yaw_rate = 0.0;  // rad/s, CCW positive

  bool operator==(const VelocityCommand&) const = default;
};

struct Waypoint {
  double t = 0.0;
  Vec3 position{0, 0, 0};  // body frame at decision time
  double yaw = 0.0;
};

struct MotionPrimitive {
  VelocityCommand command;
  std::vector<Waypoint> waypoints;
  int yaw_bin = 0;  // 0..31
  int z_bin = 0;    // 0..7
};

struct PrimitiveConfig {
  static constexpr int kYawBins = 32;
  static constexpr int kZBins = 8;

  double vx_nominal = 1.0;          // m/s
  std::vector<double> vz_values;    // 8 values, symmetric about 0
  std::vector<double> yaw_rates;    // 32 values, symmetric about 0
  double horizon = 1.5;             // s
  double dt_rollout = 0.1;          // s
  double k_lat = 0.5;               // m/s, lateral coupling gain
  double omega_ref = 1.0;           // rad/s, lateral coupling normalization

  // Linearly spaced bins built pairwise-negated so mirrored entries are
  // exact to the bit.
  static PrimitiveConfig defaults(double vx = 1.0);

  void validate() const;  // throws std::invalid_argument
};

// Lateral velocity as a saturating odd function of the yaw command.
double lateral_coupling(double yaw_rate, const PrimitiveConfig& cfg);

// Constant-command kinematic rollout from the origin; exact circular arc
// when yaw_rate is nonzero.
std::vector<Waypoint> rollout(const VelocityCommand& cmd, double horizon, double dt);

// 256 primitives over the 8 vz x 32 yaw-rate grid, ordered z_bin major.
// Built once per configuration and shared read-only.
std::vector<MotionPrimitive> build_library(const PrimitiveConfig& cfg);

inline int primitive_index(int z_bin, int yaw_bin) {
  return z_bin * PrimitiveConfig::kYawBins + yaw_bin;
}

// Rigid transform of a primitive's waypoints into the world frame.
std::vector<Waypoint> to_world(const MotionPrimitive& primitive, const Eigen::Isometry3d& pose);

}  // namespace fnav
