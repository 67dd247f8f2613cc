#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace fnav {

using Vec3 = Eigen::Vector3d;

// Wraps an angle to (-pi, pi].
inline double wrap_angle(double a) {
  const double two_pi = 2.0 * std::numbers::pi;
  a = std::fmod(a, two_pi);
  if (a <= -std::numbers::pi) a += two_pi;
  if (a > std::numbers::pi) a -= two_pi;
  return a;
}

inline Eigen::Isometry3d make_pose(const Vec3& position, double yaw) {
  Eigen::Isometry3d t = Eigen::Isometry3d::Identity();
  t.translate(position);
  t.rotate(Eigen::AngleAxisd(yaw, Vec3::UnitZ()));
  return t;
}

inline double pose_yaw(const Eigen::Isometry3d& t) {
  return std::atan2(t.linear()(1, 0), t.linear()(0, 0));
}

}  // namespace fnav
