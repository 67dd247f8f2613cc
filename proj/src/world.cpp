#include "fnav/world.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "fnav/rng.hpp"

namespace fnav {

std::string to_string(DensityClass c) {
  switch (c) {
    case DensityClass::medium: return "medium";
    case DensityClass::difficult: return "difficult";
    case DensityClass::very_difficult: return "very_difficult";
    case DensityClass::custom: return "custom";
  }
  return "custom";
}

DensityClass density_class_from_string(const std::string& s) {
  if (s == "medium") return DensityClass::medium;
  if (s == "difficult") return DensityClass::difficult;
  if (s == "very_difficult") return DensityClass::very_difficult;
  if (s == "custom" || s == "none") return DensityClass::custom;
  throw std::invalid_argument("unknown density class: " + s);
}

void WorldConfig::validate() const {
  if (extent_x <= 0.0 || extent_y <= 0.0) throw std::invalid_argument("world extent must be positive");
  if (trunk_density < 0.0) throw std::invalid_argument("trunk density must be non-negative");
  auto check_range = [](double lo, double hi, const char* name) {
    if (!(lo > 0.0) || lo > hi) throw std::invalid_argument(std::string(name) + " range invalid");
  };
  check_range(trunk_radius_min, trunk_radius_max, "trunk radius");
  check_range(trunk_height_min, trunk_height_max, "trunk height");
  check_range(branch_radius_min, branch_radius_max, "branch radius");
  check_range(branch_length_min, branch_length_max, "branch length");
  if (branches_per_tree_min < 0 || branches_per_tree_min > branches_per_tree_max)
    throw std::invalid_argument("branches per tree range invalid");
}

WorldConfig world_config_for_class(DensityClass c, std::uint64_t seed) {
  WorldConfig cfg;
  cfg.density_class = c;
  cfg.seed = seed;
  switch (c) {
    case DensityClass::medium:
    case DensityClass::custom:
      break;  // struct defaults are the medium preset
    case DensityClass::difficult:
      cfg.trunk_density = 2220.0;
      cfg.branches_per_tree_min = 4;
      cfg.branches_per_tree_max = 8;
      break;
    case DensityClass::very_difficult:
      cfg.trunk_density = 2000.0;
      cfg.branches_per_tree_min = 6;
      cfg.branches_per_tree_max = 12;
      cfg.branch_radius_min = 0.01;
      cfg.branch_radius_max = 0.02;
      cfg.branch_length_min = 1.5;
      cfg.branch_length_max = 3.75;
      break;
  }
  return cfg;
}

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

double clamp_to(double v, double lo, double hi) { return std::clamp(v, lo, hi); }

}  // namespace

ForestWorld generate_world(const WorldConfig& config) {
  config.validate();
  ForestWorld world;
  world.config = config;

  Rng rng(derive_seed(config.seed, 0x776f726c64ULL));  // "world"
  const double area_ha = config.extent_x * config.extent_y * 1e-4;
  const int n_trees = rng.poisson(config.trunk_density * area_ha);

  world.trunks.reserve(static_cast<std::size_t>(n_trees));
  for (int i = 0; i < n_trees; ++i) {
    const double x = rng.uniform(0.0, config.extent_x);
    const double y = rng.uniform(0.0, config.extent_y);
    const double radius = rng.uniform(config.trunk_radius_min, config.trunk_radius_max);
    const double height = rng.uniform(config.trunk_height_min, config.trunk_height_max);
    world.trunks.push_back({Vec3(x, y, 0.0), Vec3(x, y, height), radius});

    const int n_branches = rng.uniform_int(config.branches_per_tree_min, config.branches_per_tree_max);
    for (int b = 0; b < n_branches; ++b) {
      // Attachment on the upper 70% of the trunk, near-horizontal spread.
      const double attach_z = rng.uniform(0.3 * height, height);
      const double azimuth = rng.uniform(0.0, 2.0 * std::numbers::pi);
      const double inclination = rng.uniform(-20.0 * kDegToRad, 20.0 * kDegToRad);
      const double length = rng.uniform(config.branch_length_min, config.branch_length_max);
      const double branch_radius = rng.uniform(config.branch_radius_min, config.branch_radius_max);
      const Vec3 dir(std::cos(azimuth) * std::cos(inclination),
                     std::sin(azimuth) * std::cos(inclination), std::sin(inclination));
      const Vec3 start(x, y, attach_z);
      Vec3 end = start + length * dir;
      end.x() = clamp_to(end.x(), 0.0, config.extent_x);
      end.y() = clamp_to(end.y(), 0.0, config.extent_y);
      end.z() = std::max(end.z(), 0.0);
      world.branches.push_back({start, end, branch_radius});
    }
  }
  return world;
}

double min_clearance(const ForestWorld& world, const Vec3& center, double radius) {
  double best = std::numeric_limits<double>::infinity();
  for (const Capsule& c : world.trunks) best = std::min(best, capsule_distance(center, c));
  for (const Capsule& c : world.branches) best = std::min(best, capsule_distance(center, c));
  return best - radius;
}

namespace {

double segment_xy_distance(const Vec3& point, const Capsule& c) {
  const Vec3 p(point.x(), point.y(), 0.0);
  const Vec3 a(c.p0.x(), c.p0.y(), 0.0);
  const Vec3 b(c.p1.x(), c.p1.y(), 0.0);
  return point_segment_distance(p, a, b);
}

}  // namespace

void carve_clearing(ForestWorld& world, const Vec3& center, double radius) {
  auto hit = [&](const Capsule& c) { return segment_xy_distance(center, c) - c.radius < radius; };
  std::erase_if(world.trunks, hit);
  std::erase_if(world.branches, hit);
}

namespace {

void print_capsule(std::ostream& out, char tag, const Capsule& c) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%c %.17g %.17g %.17g %.17g %.17g %.17g %.17g\n", tag, c.p0.x(),
                c.p0.y(), c.p0.z(), c.p1.x(), c.p1.y(), c.p1.z(), c.radius);
  out << buf;
}

}  // namespace

void save_world(const ForestWorld& world, std::ostream& out) {
  const WorldConfig& c = world.config;
  char header[512];
  std::snprintf(header, sizeof(header),
                "# forest extent_x=%.17g extent_y=%.17g trunk_density=%.17g trunk_radius=%.17g,%.17g "
                "trunk_height=%.17g,%.17g branches_per_tree=%d,%d branch_radius=%.17g,%.17g "
                "branch_length=%.17g,%.17g class=%s seed=%llu\n",
                c.extent_x, c.extent_y, c.trunk_density, c.trunk_radius_min, c.trunk_radius_max,
                c.trunk_height_min, c.trunk_height_max, c.branches_per_tree_min,
                c.branches_per_tree_max, c.branch_radius_min, c.branch_radius_max,
                c.branch_length_min, c.branch_length_max, to_string(c.density_class).c_str(),
                static_cast<unsigned long long>(c.seed));
  out << header;
  for (const Capsule& cap : world.trunks) print_capsule(out, 'T', cap);
  for (const Capsule& cap : world.branches) print_capsule(out, 'B', cap);
}

void save_world(const ForestWorld& world, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open world file for writing: " + path);
  save_world(world, out);
}

ForestWorld load_world(std::istream& in) {
  ForestWorld world;
  std::string line;
  if (!std::getline(in, line) || line.rfind("# forest ", 0) != 0)
    throw std::runtime_error("world file missing header");

  WorldConfig& c = world.config;
  std::string cls;
  unsigned long long seed = 0;
  {
    std::istringstream hs(line.substr(9));
    std::string token;
    while (hs >> token) {
      const auto eq = token.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = token.substr(0, eq);
      const std::string val = token.substr(eq + 1);
      auto pair = [&val](double& lo, double& hi) {
        if (std::sscanf(val.c_str(), "%lg,%lg", &lo, &hi) != 2)
          throw std::runtime_error("bad range in world header");
      };
      if (key == "extent_x") c.extent_x = std::stod(val);
      else if (key == "extent_y") c.extent_y = std::stod(val);
      else if (key == "trunk_density") c.trunk_density = std::stod(val);
      else if (key == "trunk_radius") pair(c.trunk_radius_min, c.trunk_radius_max);
      else if (key == "trunk_height") pair(c.trunk_height_min, c.trunk_height_max);
      else if (key == "branches_per_tree") {
        if (std::sscanf(val.c_str(), "%d,%d", &c.branches_per_tree_min, &c.branches_per_tree_max) != 2)
          throw std::runtime_error("bad range in world header");
      } else if (key == "branch_radius") pair(c.branch_radius_min, c.branch_radius_max);
      else if (key == "branch_length") pair(c.branch_length_min, c.branch_length_max);
      else if (key == "class") cls = val;
      else if (key == "seed") seed = std::stoull(val);
    }
  }
  if (!cls.empty()) c.density_class = density_class_from_string(cls);
  c.seed = seed;

  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    Capsule cap;
    char tag = 0;
    if (std::sscanf(line.c_str(), "%c %lg %lg %lg %lg %lg %lg %lg", &tag, &cap.p0.x(), &cap.p0.y(),
                    &cap.p0.z(), &cap.p1.x(), &cap.p1.y(), &cap.p1.z(), &cap.radius) != 8)
      throw std::runtime_error("bad capsule line: " + line);
    if (tag == 'T') world.trunks.push_back(cap);
    else if (tag == 'B') world.branches.push_back(cap);
    else throw std::runtime_error("unknown capsule tag in world file");
  }
  return world;
}

ForestWorld load_world(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open world file: " + path);
  return load_world(in);
}

}  // namespace fnav
