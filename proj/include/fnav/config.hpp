#pragma once

#include <string>
#include <vector>

#include "fnav/metrics.hpp"
#include "fnav/sim.hpp"
#include "fnav/world.hpp"

namespace fnav {

// Everything a run needs, addressable by flat dotted keys (`world.density`,
// `planner.w_dir`, ...). Files hold one `key = value` pair per line with
// '#' comments; command-line overrides use the same syntax. Unknown keys
// are rejected.
struct Settings {
  WorldConfig world;
  PipelineConfig pipeline;
  CampaignConfig campaign;

  // Applies one override; throws std::invalid_argument on unknown keys or
  // unparsable values.
  void apply(const std::string& key, const std::string& value);

  // Full key=value echo in registry order; parsing it back reproduces the
  // settings exactly.
  std::string echo() const;

  void load_file(const std::string& path);

  static const std::vector<std::string>& known_keys();
};

// Parses "key=value" (whitespace tolerated) into its two parts.
std::pair<std::string, std::string> split_assignment(const std::string& text);

}  // namespace fnav
