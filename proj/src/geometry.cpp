#include "fnav/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace fnav {

double point_segment_distance(const Vec3& point, const Vec3& a, const Vec3& b) {
  const Vec3 ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 == 0.0) return (point - a).norm();
  const double t = std::clamp((point - a).dot(ab) / len2, 0.0, 1.0);
  return (point - (a + t * ab)).norm();
}

namespace {

// Entry t of a ray against a sphere, allowing hits starting inside.
std::optional<double> ray_sphere_entry(const Vec3& origin, const Vec3& dir, const Vec3& center,
                                       double radius2) {
  const Vec3 oc = origin - center;
  const double b = 2.0 * oc.dot(dir);
  const double c = oc.squaredNorm() - radius2;
  const double disc = b * b - 4.0 * c;  // a == 1 for unit dir
  if (disc < 0.0) return std::nullopt;
  const double sq = std::sqrt(disc);
  const double t0 = (-b - sq) * 0.5;
  const double t1 = (-b + sq) * 0.5;
  if (t0 >= 0.0) return t0;
  if (t1 >= 0.0) return t1;
  return std::nullopt;
}

}  // namespace

std::optional<double> ray_capsule_intersect(const Vec3& origin, const Vec3& dir, const Capsule& c) {
  const double radius2 = c.radius * c.radius;
  const Vec3 ab = c.p1 - c.p0;
  const double ab2 = ab.squaredNorm();
  if (ab2 == 0.0) return ray_sphere_entry(origin, dir, c.p0, radius2);

  const Vec3 ao = origin - c.p0;
  const double m = ab.dot(dir) / ab2;
  const double n = ab.dot(ao) / ab2;
  const Vec3 q = dir - ab * m;
  const Vec3 r = ao - ab * n;

  const double a = q.squaredNorm();
  const double b = 2.0 * q.dot(r);
  const double cc = r.squaredNorm() - radius2;

  std::optional<double> best;
  auto consider = [&best](std::optional<double> t) {
    if (t && (!best || *t < *best)) best = t;
  };

  if (a > 0.0) {
    const double disc = b * b - 4.0 * a * cc;
    if (disc >= 0.0) {
      const double sq = std::sqrt(disc);
      const double inv2a = 0.5 / a;
      for (const double t : {(-b - sq) * inv2a, (-b + sq) * inv2a}) {
        if (t < 0.0) continue;
        const double s = t * m + n;  // axis parameter of the hit
        if (s >= 0.0 && s <= 1.0) {
          consider(t);
          break;  // candidates sorted; first valid cylinder hit is nearest
        }
      }
    } else {
      return std::nullopt;  // misses the infinite cylinder, so misses the caps too
    }
  }
  consider(ray_sphere_entry(origin, dir, c.p0, radius2));
  consider(ray_sphere_entry(origin, dir, c.p1, radius2));
  return best;
}

}  // namespace fnav
