#include "fnav/config.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace fnav {

namespace {

struct Binding {
  std::string key;
  std::function<void(Settings&, const std::string&)> set;
  std::function<std::string(const Settings&)> get;
};

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_double(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  const double v = std::stod(value, &used);
  if (used != value.size()) throw std::invalid_argument("bad number for " + key + ": " + value);
  return v;
}

int parse_int(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  const int v = std::stoi(value, &used);
  if (used != value.size()) throw std::invalid_argument("bad integer for " + key + ": " + value);
  return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw std::invalid_argument("bad boolean for " + key + ": " + value);
}

const std::vector<Binding>& bindings() {
  static const std::vector<Binding> table = [] {
    std::vector<Binding> t;
    auto add_double = [&t](const std::string& key, auto member) {
      t.push_back({key,
                   [key, member](Settings& s, const std::string& v) { std::invoke(member, s) = parse_double(key, v); },
                   [member](const Settings& s) { return format_double(std::invoke(member, s)); }});
    };
    auto add_int = [&t](const std::string& key, auto member) {
      t.push_back({key,
                   [key, member](Settings& s, const std::string& v) { std::invoke(member, s) = parse_int(key, v); },
                   [member](const Settings& s) { return std::to_string(std::invoke(member, s)); }});
    };
    auto add_bool = [&t](const std::string& key, auto member) {
      t.push_back({key,
                   [key, member](Settings& s, const std::string& v) { std::invoke(member, s) = parse_bool(key, v); },
                   [member](const Settings& s) { return std::invoke(member, s) ? "true" : "false"; }});
    };

    t.push_back({"world.class",
                 [](Settings& s, const std::string& v) {
                   const std::uint64_t seed = s.world.seed;
                   s.world = world_config_for_class(density_class_from_string(v), seed);
                 },
                 [](const Settings& s) { return to_string(s.world.density_class); }});
    add_double("world.extent_x", [](auto& s) -> auto& { return s.world.extent_x; });
    add_double("world.extent_y", [](auto& s) -> auto& { return s.world.extent_y; });
    add_double("world.density", [](auto& s) -> auto& { return s.world.trunk_density; });
    add_double("world.trunk_radius_min", [](auto& s) -> auto& { return s.world.trunk_radius_min; });
    add_double("world.trunk_radius_max", [](auto& s) -> auto& { return s.world.trunk_radius_max; });
    add_double("world.trunk_height_min", [](auto& s) -> auto& { return s.world.trunk_height_min; });
    add_double("world.trunk_height_max", [](auto& s) -> auto& { return s.world.trunk_height_max; });
    add_int("world.branches_min", [](auto& s) -> auto& { return s.world.branches_per_tree_min; });
    add_int("world.branches_max", [](auto& s) -> auto& { return s.world.branches_per_tree_max; });
    add_double("world.branch_radius_min", [](auto& s) -> auto& { return s.world.branch_radius_min; });
    add_double("world.branch_radius_max", [](auto& s) -> auto& { return s.world.branch_radius_max; });
    add_double("world.branch_length_min", [](auto& s) -> auto& { return s.world.branch_length_min; });
    add_double("world.branch_length_max", [](auto& s) -> auto& { return s.world.branch_length_max; });

    add_double("camera.hfov", [](auto& s) -> auto& { return s.pipeline.camera.hfov; });
    add_double("camera.vfov", [](auto& s) -> auto& { return s.pipeline.camera.vfov; });
    add_double("camera.max_range", [](auto& s) -> auto& { return s.pipeline.camera.max_range; });

    add_double("noise.range_sigma", [](auto& s) -> auto& { return s.pipeline.noise.range_noise_sigma; });
    add_int("noise.edge_dropout_px", [](auto& s) -> auto& { return s.pipeline.noise.edge_dropout_px; });
    add_double("noise.thin_width_px", [](auto& s) -> auto& { return s.pipeline.noise.thin_dropout_width_px; });
    add_double("noise.dropout_p", [](auto& s) -> auto& { return s.pipeline.noise.random_dropout_p; });

    add_int("improve.kernel", [](auto& s) -> auto& { return s.pipeline.improve.kernel; });
    add_double("improve.d_act", [](auto& s) -> auto& { return s.pipeline.improve.d_act; });
    add_int("improve.max_passes", [](auto& s) -> auto& { return s.pipeline.improve.max_passes; });

    t.push_back({"primitives.vx",
                 [](Settings& s, const std::string& v) {
                   s.pipeline.primitives = PrimitiveConfig::defaults(parse_double("primitives.vx", v));
                 },
                 [](const Settings& s) { return format_double(s.pipeline.primitives.vx_nominal); }});
    add_double("primitives.horizon", [](auto& s) -> auto& { return s.pipeline.primitives.horizon; });
    add_double("primitives.dt", [](auto& s) -> auto& { return s.pipeline.primitives.dt_rollout; });
    add_double("primitives.k_lat", [](auto& s) -> auto& { return s.pipeline.primitives.k_lat; });
    add_double("primitives.omega_ref", [](auto& s) -> auto& { return s.pipeline.primitives.omega_ref; });

    add_double("predictor.inflated_radius", [](auto& s) -> auto& { return s.pipeline.predictor.inflated_radius; });
    add_double("predictor.risk_steepness", [](auto& s) -> auto& { return s.pipeline.predictor.risk_steepness; });
    add_int("predictor.n_members", [](auto& s) -> auto& { return s.pipeline.predictor.n_members; });
    add_double("predictor.radius_jitter", [](auto& s) -> auto& { return s.pipeline.predictor.member_radius_jitter; });
    add_double("predictor.oov_risk", [](auto& s) -> auto& { return s.pipeline.predictor.out_of_view_risk; });
    add_double("predictor.latency", [](auto& s) -> auto& { return s.pipeline.predictor.control_latency; });
    add_double("predictor.ut_alpha", [](auto& s) -> auto& { return s.pipeline.predictor.ut.alpha; });
    add_double("predictor.ut_beta", [](auto& s) -> auto& { return s.pipeline.predictor.ut.beta; });
    add_double("predictor.ut_kappa", [](auto& s) -> auto& { return s.pipeline.predictor.ut.kappa; });

    add_double("supervisor.d_min", [](auto& s) -> auto& { return s.pipeline.supervisor.d_min; });
    add_double("supervisor.epsilon", [](auto& s) -> auto& { return s.pipeline.supervisor.epsilon; });
    add_double("supervisor.r", [](auto& s) -> auto& { return s.pipeline.supervisor.r; });
    add_double("supervisor.h_margin", [](auto& s) -> auto& { return s.pipeline.supervisor.h_margin; });
    add_double("supervisor.lookahead", [](auto& s) -> auto& { return s.pipeline.supervisor.lookahead; });

    add_double("planner.risk_band", [](auto& s) -> auto& { return s.pipeline.planner.risk_band; });
    add_double("planner.w_dir", [](auto& s) -> auto& { return s.pipeline.planner.w_dir; });
    add_double("planner.w_alt", [](auto& s) -> auto& { return s.pipeline.planner.w_alt; });
    add_double("planner.w_bias", [](auto& s) -> auto& { return s.pipeline.planner.w_bias; });
    add_int("planner.window", [](auto& s) -> auto& { return s.pipeline.planner.window; });
    add_int("planner.k_osc", [](auto& s) -> auto& { return s.pipeline.planner.k_osc; });
    add_int("planner.clear_after", [](auto& s) -> auto& { return s.pipeline.planner.clear_after; });
    add_double("planner.omega_rot", [](auto& s) -> auto& { return s.pipeline.planner.omega_rot; });
    add_double("planner.deadband", [](auto& s) -> auto& { return s.pipeline.planner.yaw_sign_deadband; });

    add_double("mission.start_x", [](auto& s) -> auto& { return s.pipeline.mission.start.x(); });
    add_double("mission.start_y", [](auto& s) -> auto& { return s.pipeline.mission.start.y(); });
    add_double("mission.start_z", [](auto& s) -> auto& { return s.pipeline.mission.start.z(); });
    add_double("mission.goal_x", [](auto& s) -> auto& { return s.pipeline.mission.goal.x(); });
    add_double("mission.goal_y", [](auto& s) -> auto& { return s.pipeline.mission.goal.y(); });
    add_double("mission.goal_z", [](auto& s) -> auto& { return s.pipeline.mission.goal.z(); });
    add_double("mission.goal_tolerance", [](auto& s) -> auto& { return s.pipeline.mission.goal_tolerance; });
    add_double("mission.time_limit", [](auto& s) -> auto& { return s.pipeline.mission.time_limit; });
    add_int("mission.sensor_hz", [](auto& s) -> auto& { return s.pipeline.mission.sensor_hz; });
    add_int("mission.plan_hz", [](auto& s) -> auto& { return s.pipeline.mission.plan_hz; });
    add_double("mission.tau_v", [](auto& s) -> auto& { return s.pipeline.mission.tau_v; });
    add_double("mission.tau_yaw", [](auto& s) -> auto& { return s.pipeline.mission.tau_yaw; });
    add_double("mission.a_max", [](auto& s) -> auto& { return s.pipeline.mission.a_max; });
    add_double("mission.physical_radius", [](auto& s) -> auto& { return s.pipeline.mission.physical_radius; });
    add_double("mission.odom_sigma", [](auto& s) -> auto& { return s.pipeline.mission.odom_noise_sigma; });
    add_bool("mission.use_ut", [](auto& s) -> auto& { return s.pipeline.mission.use_ut; });

    add_int("campaign.n_flights", [](auto& s) -> auto& { return s.campaign.n_flights; });
    t.push_back({"campaign.class",
                 [](Settings& s, const std::string& v) {
                   s.campaign.environment = density_class_from_string(v);
                 },
                 [](const Settings& s) { return to_string(s.campaign.environment); }});
    add_double("campaign.velocity", [](auto& s) -> auto& { return s.campaign.target_velocity; });
    add_int("campaign.jobs", [](auto& s) -> auto& { return s.campaign.jobs; });
    return t;
  }();
  return table;
}

}  // namespace

void Settings::apply(const std::string& key, const std::string& value) {
  for (const Binding& b : bindings()) {
    if (b.key == key) {
      b.set(*this, value);
      return;
    }
  }
  throw std::invalid_argument("unknown config key: " + key);
}

std::string Settings::echo() const {
  std::string out;
  for (const Binding& b : bindings()) {
    out += b.key;
    out += " = ";
    out += b.get(*this);
    out += "\n";
  }
  return out;
}

void Settings::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto start = line.find_first_not_of(" \t");
    if (start == std::string::npos) continue;
    try {
      const auto [key, value] = split_assignment(line);
      apply(key, value);
    } catch (const std::exception& e) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

const std::vector<std::string>& Settings::known_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const Binding& b : bindings()) k.push_back(b.key);
    return k;
  }();
  return keys;
}

std::pair<std::string, std::string> split_assignment(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) throw std::invalid_argument("expected key=value: " + text);
  auto trim = [](std::string s) {
    const auto a = s.find_first_not_of(" \t");
    const auto b = s.find_last_not_of(" \t");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
  };
  return {trim(text.substr(0, eq)), trim(text.substr(eq + 1))};
}

}  // namespace fnav
