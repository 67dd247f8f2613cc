#include "fnav/depth_render.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fnav {

DepthRenderer::DepthRenderer(const ForestWorld& world, const CameraModel& camera) : camera_(camera) {
  capsules_.reserve(world.capsule_count());
  capsules_.insert(capsules_.end(), world.trunks.begin(), world.trunks.end());
  capsules_.insert(capsules_.end(), world.branches.begin(), world.branches.end());

  rays_.resize(static_cast<std::size_t>(camera.width) * camera.height);
  for (int v = 0; v < camera.height; ++v)
    for (int u = 0; u < camera.width; ++u)
      rays_[static_cast<std::size_t>(v) * camera.width + u] = camera.pixel_ray(u, v);
}

namespace {

constexpr double kNearZ = 0.05;       // m, below this the screen bbox degenerates
constexpr double kChunkLength = 1.0;  // m of capsule axis per rasterized chunk
constexpr double kPixelMargin = 1.5;  // extra bbox padding in pixels

struct FrameCapsule {
  Vec3 p0, p1;      // camera frame
  Vec3 ab;          // p1 - p0
  double inv_ab2;   // 1 / |ab|^2, 0 for spheres
  double n;         // axis parameter of the ray origin's projection
  Vec3 rvec;        // origin offset orthogonal to the axis
  double radius;
  double radius2;
};

// Interval bound of f * (x/z) for x in [x_lo, x_hi], z in [z_lo, z_hi], z_lo > 0.
inline void project_interval(double f, double c, double x_lo, double x_hi, double z_lo, double z_hi,
                             double& out_lo, double& out_hi) {
  out_lo = c + f * (x_lo >= 0.0 ? x_lo / z_hi : x_lo / z_lo);
  out_hi = c + f * (x_hi >= 0.0 ? x_hi / z_lo : x_hi / z_hi);
}

inline double sphere_entry(const Vec3& p, double radius2, const Vec3& d) {
  const double b = -2.0 * p.dot(d);
  const double c = p.squaredNorm() - radius2;
  const double disc = b * b - 4.0 * c;
  if (disc < 0.0) return std::numeric_limits<double>::infinity();
  const double sq = std::sqrt(disc);
  const double t0 = (-b - sq) * 0.5;
  if (t0 >= 0.0) return t0;
  const double t1 = (-b + sq) * 0.5;
  if (t1 >= 0.0) return t1;
  return std::numeric_limits<double>::infinity();
}

// Mirrors ray_capsule_intersect for the uncommon configurations (origin
// inside the infinite cylinder, axis-parallel rays, cap-region hits).
inline double intersect_slow(const FrameCapsule& fc, const Vec3& d) {
  double best = std::numeric_limits<double>::infinity();
  const double ab2 = fc.ab.squaredNorm();
  if (ab2 > 0.0) {
    const double m = fc.ab.dot(d) * fc.inv_ab2;
    const Vec3 q = d - fc.ab * m;
    const double a = q.squaredNorm();
    if (a > 0.0) {
      const double b = 2.0 * q.dot(fc.rvec);
      const double c = fc.rvec.squaredNorm() - fc.radius2;
      const double disc = b * b - 4.0 * a * c;
      if (disc < 0.0) return best;  // misses the infinite cylinder entirely
      const double sq = std::sqrt(disc);
      const double inv2a = 0.5 / a;
      for (const double t : {(-b - sq) * inv2a, (-b + sq) * inv2a}) {
        if (t < 0.0) continue;
        const double s = t * m + fc.n;
        if (s >= 0.0 && s <= 1.0) {
          best = t;
          break;
        }
      }
    }
  }
  best = std::min(best, sphere_entry(fc.p0, fc.radius2, d));
  best = std::min(best, sphere_entry(fc.p1, fc.radius2, d));
  return best;
}

}  // namespace

DepthImage DepthRenderer::render(const Eigen::Isometry3d& body_pose) const {
  const Eigen::Isometry3d cam_to_world = body_pose * camera_.mount_pose;
  const Eigen::Isometry3d world_to_cam = cam_to_world.inverse();
  const int width = camera_.width;
  const int height = camera_.height;
  const double max_range = camera_.max_range;

  std::vector<float> ranges(static_cast<std::size_t>(width) * height,
                            std::numeric_limits<float>::infinity());

  const double tan_h = std::tan(camera_.hfov / 2.0);
  const double tan_v = std::tan(camera_.vfov / 2.0);
  const double norm_h = std::sqrt(1.0 + tan_h * tan_h);
  const double norm_v = std::sqrt(1.0 + tan_v * tan_v);

  for (const Capsule& world_capsule : capsules_) {
    FrameCapsule fc;
    fc.p0 = world_to_cam * world_capsule.p0;
    fc.p1 = world_to_cam * world_capsule.p1;
    fc.radius = world_capsule.radius;
    fc.radius2 = fc.radius * fc.radius;

    // Range cull: closest possible surface point already beyond max_range.
    if (point_segment_distance(Vec3::Zero(), fc.p0, fc.p1) - fc.radius > max_range) continue;
    // Behind-camera cull.
    if (std::max(fc.p0.z(), fc.p1.z()) + fc.radius <= 1e-3) continue;
    // Frustum side planes (conservative: both endpoints beyond one plane).
    const auto outside = [&](double d0, double d1) { return d0 < -fc.radius && d1 < -fc.radius; };
    if (outside((fc.p0.x() + fc.p0.z() * tan_h) / norm_h, (fc.p1.x() + fc.p1.z() * tan_h) / norm_h))
      continue;
    if (outside((-fc.p0.x() + fc.p0.z() * tan_h) / norm_h, (-fc.p1.x() + fc.p1.z() * tan_h) / norm_h))
      continue;
    if (outside((fc.p0.y() + fc.p0.z() * tan_v) / norm_v, (fc.p1.y() + fc.p1.z() * tan_v) / norm_v))
      continue;
    if (outside((-fc.p0.y() + fc.p0.z() * tan_v) / norm_v, (-fc.p1.y() + fc.p1.z() * tan_v) / norm_v))
      continue;

    fc.ab = fc.p1 - fc.p0;
    const double ab2 = fc.ab.squaredNorm();
    fc.inv_ab2 = ab2 > 0.0 ? 1.0 / ab2 : 0.0;
    fc.n = -fc.p0.dot(fc.ab) * fc.inv_ab2;  // origin is the camera center
    fc.rvec = -fc.p0 - fc.ab * fc.n;

    const double axis_len = std::sqrt(ab2);
    const int n_chunks = std::max(1, static_cast<int>(std::ceil(axis_len / kChunkLength)));

    for (int chunk = 0; chunk < n_chunks; ++chunk) {
      const double s0 = static_cast<double>(chunk) / n_chunks;
      const double s1 = static_cast<double>(chunk + 1) / n_chunks;
      const Vec3 a = fc.p0 + s0 * fc.ab;
      const Vec3 b = fc.p0 + s1 * fc.ab;

      int u_begin = 0, u_end = width, v_begin = 0, v_end = height;
      const double z_lo = std::min(a.z(), b.z()) - fc.radius;
      if (z_lo > kNearZ) {
        const double z_hi = std::max(a.z(), b.z()) + fc.radius;
        double u_lo, u_hi, v_lo, v_hi;
        project_interval(camera_.fx(), camera_.cx(), std::min(a.x(), b.x()) - fc.radius,
                         std::max(a.x(), b.x()) + fc.radius, z_lo, z_hi, u_lo, u_hi);
        project_interval(camera_.fy(), camera_.cy(), std::min(a.y(), b.y()) - fc.radius,
                         std::max(a.y(), b.y()) + fc.radius, z_lo, z_hi, v_lo, v_hi);
        u_begin = std::max(0, static_cast<int>(std::floor(u_lo - kPixelMargin)));
        u_end = std::min(width, static_cast<int>(std::ceil(u_hi + kPixelMargin)) + 1);
        v_begin = std::max(0, static_cast<int>(std::floor(v_lo - kPixelMargin)));
        v_end = std::min(height, static_cast<int>(std::ceil(v_hi + kPixelMargin)) + 1);
        if (u_begin >= u_end || v_begin >= v_end) continue;
      }

      for (int v = v_begin; v < v_end; ++v) {
        const Vec3* ray_row = rays_.data() + static_cast<std::size_t>(v) * width;
        float* range_row = ranges.data() + static_cast<std::size_t>(v) * width;
        for (int u = u_begin; u < u_end; ++u) {
          const Vec3& d = ray_row[u];
          double t;
          if (fc.inv_ab2 > 0.0) {
            const double m = fc.ab.dot(d) * fc.inv_ab2;
            const Vec3 q = d - fc.ab * m;
            const double qa = q.squaredNorm();
            if (qa <= 1e-12) {
              t = intersect_slow(fc, d);
            } else {
              const double qb = 2.0 * q.dot(fc.rvec);
              const double qc = fc.rvec.squaredNorm() - fc.radius2;
              const double disc = qb * qb - 4.0 * qa * qc;
              if (disc < 0.0) continue;
              const double t0 = (-qb - std::sqrt(disc)) * (0.5 / qa);
              const double s = t0 * m + fc.n;
              if (t0 >= 0.0 && s >= 0.0 && s <= 1.0) {
                t = t0;  // entry on the cylindrical body; caps cannot be nearer
              } else {
                t = intersect_slow(fc, d);
              }
            }
          } else {
            t = sphere_entry(fc.p0, fc.radius2, d);
          }
          if (t <= max_range && static_cast<float>(t) < range_row[u])
            range_row[u] = static_cast<float>(t);
        }
      }
    }
  }

  DepthImage image(width, height);
  for (std::size_t i = 0; i < ranges.size(); ++i)
    image.values[i] = std::isfinite(ranges[i]) ? ranges[i] : DepthImage::kUndefined;
  return image;
}

DepthImage render_depth(const ForestWorld& world, const Eigen::Isometry3d& body_pose,
                        const CameraModel& camera) {
  return DepthRenderer(world, camera).render(body_pose);
}

}  // namespace fnav
