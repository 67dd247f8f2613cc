#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "fnav/rng.hpp"
#include "fnav/world.hpp"

using namespace fnav;

namespace {

WorldConfig small_config(std::uint64_t seed) {
  WorldConfig cfg = world_config_for_class(DensityClass::medium, seed);
  cfg.extent_x = 30.0;
  cfg.extent_y = 30.0;
  return cfg;
}

}  // namespace

TEST_CASE("zero density gives an empty world") {
  WorldConfig cfg = small_config(5);
  cfg.trunk_density = 0.0;
  const ForestWorld world = generate_world(cfg);
  CHECK(world.trunks.empty());
  CHECK(world.branches.empty());
}

TEST_CASE("trunk count follows the Poisson intensity") {
  // 100 m x 100 m at 1040 trees/ha: mean 1040 per realization; the sample
  // mean over 200 seeds must sit within 3*sqrt(1040) of the target.
  double total = 0.0;
  for (int seed = 0; seed < 200; ++seed) {
    WorldConfig cfg = world_config_for_class(DensityClass::medium, static_cast<std::uint64_t>(seed));
    cfg.extent_x = 100.0;
    cfg.extent_y = 100.0;
    total += static_cast<double>(generate_world(cfg).trunks.size());
  }
  const double mean = total / 200.0;
  CHECK(std::fabs(mean - 1040.0) < 3.0 * std::sqrt(1040.0));
}

TEST_CASE("generation is a pure function of config and seed") {
  const WorldConfig cfg = small_config(42);
  const ForestWorld a = generate_world(cfg);
  const ForestWorld b = generate_world(cfg);
  REQUIRE(a.trunks.size() == b.trunks.size());
  REQUIRE(a.branches.size() == b.branches.size());
  for (std::size_t i = 0; i < a.trunks.size(); ++i) {
    CHECK(a.trunks[i].p0 == b.trunks[i].p0);
    CHECK(a.trunks[i].p1 == b.trunks[i].p1);
    CHECK(a.trunks[i].radius == b.trunks[i].radius);
  }
  const ForestWorld c = generate_world(small_config(43));
  CHECK(a.trunks.size() != c.trunks.size());  // different seed, different draw
}

TEST_CASE("generated capsules respect configured ranges and extent") {
  const WorldConfig cfg = world_config_for_class(DensityClass::very_difficult, 7);
  const ForestWorld world = generate_world(cfg);
  REQUIRE(!world.trunks.empty());
  for (const Capsule& t : world.trunks) {
    CHECK(t.radius >= cfg.trunk_radius_min);
    CHECK(t.radius <= cfg.trunk_radius_max);
    const double height = t.p1.z() - t.p0.z();
    CHECK(height >= cfg.trunk_height_min);
    CHECK(height <= cfg.trunk_height_max);
    CHECK(t.p0.x() >= 0.0);
    CHECK(t.p0.x() <= cfg.extent_x);
    CHECK(t.p0.y() >= 0.0);
    CHECK(t.p0.y() <= cfg.extent_y);
  }
  for (const Capsule& b : world.branches) {
    CHECK(b.radius >= cfg.branch_radius_min);
    CHECK(b.radius <= cfg.branch_radius_max);
    for (const Vec3& p : {b.p0, b.p1}) {
      CHECK(p.x() >= 0.0);
      CHECK(p.x() <= cfg.extent_x);
      CHECK(p.y() >= 0.0);
      CHECK(p.y() <= cfg.extent_y);
      CHECK(p.z() >= 0.0);
    }
  }
}

TEST_CASE("min_clearance on an empty world is +infinity") {
  ForestWorld world;
  CHECK(min_clearance(world, {1, 2, 3}, 0.5) == std::numeric_limits<double>::infinity());
}

TEST_CASE("min_clearance on a trunk axis equals minus the trunk radius") {
  ForestWorld world;
  world.trunks.push_back({{0, 0, 0}, {0, 0, 5}, 0.13});
  CHECK(min_clearance(world, {0, 0, 2.5}, 0.0) == doctest::Approx(-0.13));
}

TEST_CASE("min_clearance decreases exactly linearly in the query radius") {
  const ForestWorld world = generate_world(small_config(9));
  Rng rng(77);
  for (int i = 0; i < 50; ++i) {
    const Vec3 p(rng.uniform(0, 30), rng.uniform(0, 30), rng.uniform(0, 6));
    const double base = min_clearance(world, p, 0.0);
    const double delta = rng.uniform(0.0, 1.0);
    CHECK(min_clearance(world, p, delta) == doctest::Approx(base - delta).epsilon(1e-15));
  }
}

TEST_CASE("min_clearance agrees with a dense surface-sampling oracle") {
  ForestWorld world;
  world.trunks.push_back({{2, 1, 0}, {2, 1, 6}, 0.2});
  world.branches.push_back({{2, 1, 3}, {4.5, 2, 3.5}, 0.05});
  world.branches.push_back({{0, 4, 1}, {1, 4, 1}, 0.3});

  // ~1e5 structured samples per capsule surface (cylinder rings + caps)
  std::vector<Vec3> cloud;
  auto sample_capsule = [&cloud](const Capsule& c) {
    const Vec3 axis = c.p1 - c.p0;
    const double len = axis.norm();
    Vec3 u = axis.norm() > 0 ? Vec3(axis.normalized()) : Vec3(0, 0, 1);
    Vec3 e1 = u.cross(Vec3(1, 0, 0));
    if (e1.norm() < 1e-6) e1 = u.cross(Vec3(0, 1, 0));
    e1.normalize();
    const Vec3 e2 = u.cross(e1);
    const int n_rings = 250, n_angle = 240;
    for (int i = 0; i <= n_rings; ++i) {
      const Vec3 center = c.p0 + axis * (static_cast<double>(i) / n_rings);
      for (int a = 0; a < n_angle; ++a) {
        const double phi = 2.0 * M_PI * a / n_angle;
        cloud.push_back(center + c.radius * (std::cos(phi) * e1 + std::sin(phi) * e2));
      }
    }
    for (int i = 0; i < n_rings * 40; ++i) {  // cap hemispheres
      const double z = 1.0 - 2.0 * (i + 0.5) / (n_rings * 40);
      const double r = std::sqrt(1.0 - z * z);
      const double phi = 2.399963229728653 * i;  // golden-angle spiral
      const Vec3 dir = r * std::cos(phi) * e1 + r * std::sin(phi) * e2 + z * u;
      cloud.push_back((z > 0 ? c.p1 : c.p0) + c.radius * dir);
    }
    (void)len;
  };
  for (const Capsule& c : world.trunks) sample_capsule(c);
  for (const Capsule& c : world.branches) sample_capsule(c);

  Rng rng(31337);
  int checked = 0;
  while (checked < 1000) {
    const Vec3 p(rng.uniform(-1, 6), rng.uniform(-1, 6), rng.uniform(0, 7));
    const double clearance = min_clearance(world, p, 0.0);
    if (clearance < 0.05) continue;  // stay clear of the surface-sampling resolution limit
    double cloud_min = std::numeric_limits<double>::infinity();
    for (const Vec3& q : cloud) cloud_min = std::min(cloud_min, (p - q).norm());
    CHECK(std::fabs(clearance - cloud_min) < 1e-3);
    ++checked;
  }
}

TEST_CASE("carve_clearing removes capsules near the spawn point") {
  ForestWorld world;
  world.trunks.push_back({{5, 5, 0}, {5, 5, 8}, 0.2});
  world.trunks.push_back({{9, 5, 0}, {9, 5, 8}, 0.2});
  world.branches.push_back({{5, 5, 2}, {6, 5, 2}, 0.05});
  carve_clearing(world, {5.5, 5.0, 1.2}, 1.5);
  CHECK(world.trunks.size() == 1);   // the far trunk stays
  CHECK(world.branches.empty());
  CHECK(world.trunks[0].p0.x() == 9.0);
}

TEST_CASE("world serialization round-trips bit-exactly") {
  const ForestWorld world = generate_world(small_config(123));
  std::ostringstream first;
  save_world(world, first);
  std::istringstream in(first.str());
  const ForestWorld loaded = load_world(in);
  std::ostringstream second;
  save_world(loaded, second);
  CHECK(first.str() == second.str());
  REQUIRE(loaded.trunks.size() == world.trunks.size());
  REQUIRE(loaded.branches.size() == world.branches.size());
  for (std::size_t i = 0; i < world.branches.size(); ++i) {
    CHECK(loaded.branches[i].p0 == world.branches[i].p0);
    CHECK(loaded.branches[i].p1 == world.branches[i].p1);
    CHECK(loaded.branches[i].radius == world.branches[i].radius);
  }
  CHECK(loaded.config.seed == world.config.seed);
  CHECK(loaded.config.trunk_density == world.config.trunk_density);
}

TEST_CASE("invalid configs are rejected") {
  WorldConfig cfg = small_config(1);
  cfg.extent_x = -1.0;
  CHECK_THROWS_AS(generate_world(cfg), std::invalid_argument);
  cfg = small_config(1);
  cfg.branch_radius_min = 0.1;
  cfg.branch_radius_max = 0.05;
  CHECK_THROWS_AS(generate_world(cfg), std::invalid_argument);
}
