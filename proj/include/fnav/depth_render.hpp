#pragma once

#include "fnav/camera.hpp"
#include "fnav/depth_image.hpp"
#include "fnav/world.hpp"

namespace fnav {

// Exact ray-cast range renderer. Each capsule is rasterized over a
// conservative screen-space bounding box, so the result equals the
// per-pixel minimum over all capsule intersections while touching only
// a small fraction of pixel/capsule pairs.
class DepthRenderer {
 public:
  DepthRenderer(const ForestWorld& world, const CameraModel& camera);

  // body_pose composes with the camera mount; pixels with no hit inside
  // max_range are left undefined.
  DepthImage render(const Eigen::Isometry3d& body_pose) const;

  const CameraModel& camera() const { return camera_; }

 private:
  CameraModel camera_;
  std::vector<Capsule> capsules_;
  std::vector<Vec3> rays_;  // per-pixel unit directions, camera frame, row-major
};

// One-shot convenience wrapper for tests and tools.
DepthImage render_depth(const ForestWorld& world, const Eigen::Isometry3d& body_pose,
                        const CameraModel& camera);

}  // namespace fnav
