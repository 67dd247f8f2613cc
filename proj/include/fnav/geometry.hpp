#pragma once

#include <limits>
#include <optional>

#include "fnav/math_utils.hpp"

namespace fnav {

// Swept sphere between two axis endpoints. p0 == p1 degenerates to a sphere.
struct Capsule {
  Vec3 p0{0, 0, 0};
  Vec3 p1{0, 0, 0};
  double radius = 0.0;
};

// Distance from a point to the segment [a, b].
double point_segment_distance(const Vec3& point, const Vec3& a, const Vec3& b);

// Signed distance from a point to the capsule surface (negative inside).
inline double capsule_distance(const Vec3& point, const Capsule& c) {
  return point_segment_distance(point, c.p0, c.p1) - c.radius;
}

// Smallest t >= 0 with |origin + t*dir| on the capsule surface, or nullopt.
// dir must be unit length so t is the Euclidean range.
std::optional<double> ray_capsule_intersect(const Vec3& origin, const Vec3& dir, const Capsule& c);

}  // namespace fnav
