#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fnav/geometry.hpp"

namespace fnav {

enum class DensityClass { medium, difficult, very_difficult, custom };

std::string to_string(DensityClass c);
DensityClass density_class_from_string(const std::string& s);

struct WorldConfig {
  double extent_x = 80.0;  // m, world spans [0, extent_x]
  double extent_y = 36.0;  // m, world spans [0, extent_y]
  double trunk_density = 1040.0;  // trees per hectare
  double trunk_radius_min = 0.08, trunk_radius_max = 0.20;  // m
  double trunk_height_min = 4.0, trunk_height_max = 12.0;   // m
  int branches_per_tree_min = 2, branches_per_tree_max = 4;
  double branch_radius_min = 0.02, branch_radius_max = 0.04;  // m
  double branch_length_min = 1.0, branch_length_max = 2.5;    // m
  DensityClass density_class = DensityClass::medium;
  std::uint64_t seed = 0;

  void validate() const;  // throws std::invalid_argument on bad ranges
};

// Preset parameters per density class. Densities follow the three test
// regimes (1040 / 2220 / 2000 trees/ha); the very difficult regime trades
// tree count for more, longer and thinner branches.
WorldConfig world_config_for_class(DensityClass c, std::uint64_t seed);

struct ForestWorld {
  std::vector<Capsule> trunks;
  std::vector<Capsule> branches;
  WorldConfig config;

  std::size_t capsule_count() const { return trunks.size() + branches.size(); }
};

// Samples trunk positions from a homogeneous Poisson process over the
// extent and attaches branches to the upper portion of each trunk.
// Pure function of config (including seed).
ForestWorld generate_world(const WorldConfig& config);

// Minimum clearance between a sphere (center, radius) and every capsule.
// Negative means collision; +infinity for an empty world.
double min_clearance(const ForestWorld& world, const Vec3& center, double radius);

// Removes capsules whose axis passes within `radius` (in the xy plane) of
// the given point, opening a spawn/goal clearing.
void carve_clearing(ForestWorld& world, const Vec3& center, double radius);

// Line-oriented text format: a config header followed by one capsule per
// line (`T|B x0 y0 z0 x1 y1 z1 r`, printed with round-trip precision).
void save_world(const ForestWorld& world, std::ostream& out);
void save_world(const ForestWorld& world, const std::string& path);
ForestWorld load_world(std::istream& in);
ForestWorld load_world(const std::string& path);

}  // namespace fnav
