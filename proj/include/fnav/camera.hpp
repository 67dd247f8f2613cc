#pragma once

#include <cmath>
#include <optional>

#include "fnav/math_utils.hpp"

namespace fnav {

// Pinhole range camera. The camera frame is the usual computer-vision one
// (+z forward, +x right, +y down); the default mount maps it onto the body
// frame (+x forward, +y left, +z up) looking straight ahead.
struct CameraModel {
  int width = 480;
  int height = 270;
  double hfov = 1.518;  // rad
  double vfov = 1.012;  // rad
  double max_range = 10.0;  // m
  Eigen::Isometry3d mount_pose = default_mount();  // camera frame -> body frame

  static Eigen::Isometry3d default_mount() {
    Eigen::Isometry3d t = Eigen::Isometry3d::Identity();
    Eigen::Matrix3d r;
    // columns: camera x/y/z axes expressed in the body frame
    r.col(0) = Vec3(0, -1, 0);
    r.col(1) = Vec3(0, 0, -1);
    r.col(2) = Vec3(1, 0, 0);
    t.linear() = r;
    return t;
  }

  double fx() const { return (width / 2.0) / std::tan(hfov / 2.0); }
  double fy() const { return (height / 2.0) / std::tan(vfov / 2.0); }
  double cx() const { return width / 2.0; }
  double cy() const { return height / 2.0; }

  // Unit ray through the center of pixel (u, v), in the camera frame.
  Vec3 pixel_ray(int u, int v) const {
    const Vec3 d((u + 0.5 - cx()) / fx(), (v + 0.5 - cy()) / fy(), 1.0);
    return d.normalized();
  }

  // Continuous pixel coordinates of a camera-frame point, or nullopt when
  // it lies at or behind the image plane.
  std::optional<Eigen::Vector2d> project(const Vec3& p_cam) const {
    if (p_cam.z() <= 1e-9) return std::nullopt;
    return Eigen::Vector2d(cx() + fx() * p_cam.x() / p_cam.z(), cy() + fy() * p_cam.y() / p_cam.z());
  }

  bool contains(const Eigen::Vector2d& px) const {
    return px.x() >= 0.0 && px.x() < width && px.y() >= 0.0 && px.y() < height;
  }
};

}  // namespace fnav
