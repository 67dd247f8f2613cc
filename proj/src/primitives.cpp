#include "fnav/primitives.hpp"

#include <cmath>
#include <stdexcept>

namespace fnav {

namespace {

std::vector<double> symmetric_linspace(double hi, int count) {
  std::vector<double> values(static_cast<std::size_t>(count));
  const double step = 2.0 * hi / (count - 1);
  for (int k = 0; k < count / 2; ++k) {
    const double value = -hi + k * step;
    values[static_cast<std::size_t>(k)] = value;
    values[static_cast<std::size_t>(count - 1 - k)] = -value;
  }
  return values;
}

}  // namespace

PrimitiveConfig PrimitiveConfig::defaults(double vx) {
  PrimitiveConfig cfg;
  cfg.vx_nominal = vx;
  // vz span keeps the vertical safety band of every rollout inside the
  // 58 degree vertical FOV at sub-meter range; steeper climbs would move
  // into space the camera cannot clear.
  cfg.vz_values = symmetric_linspace(0.25, kZBins);
  cfg.yaw_rates = symmetric_linspace(1.2, kYawBins);
  return cfg;
}

void PrimitiveConfig::validate() const {
  if (vz_values.size() != kZBins) throw std::invalid_argument("expected 8 vz values");
  if (yaw_rates.size() != kYawBins) throw std::invalid_argument("expected 32 yaw rates");
  auto check = [](const std::vector<double>& v, const char* name) {
    for (std::size_t i = 0; i + 1 < v.size(); ++i)
      if (!(v[i] < v[i + 1])) throw std::invalid_argument(std::string(name) + " not strictly increasing");
    for (std::size_t i = 0; i < v.size() / 2; ++i)
      if (std::fabs(v[i] + v[v.size() - 1 - i]) > 1e-12)
        throw std::invalid_argument(std::string(name) + " not symmetric about zero");
  };
  check(vz_values, "vz_values");
  check(yaw_rates, "yaw_rates");
  if (!(horizon > 0.0) || !(dt_rollout > 0.0)) throw std::invalid_argument("horizon and dt must be positive");
  if (!(omega_ref > 0.0)) throw std::invalid_argument("omega_ref must be positive");
}

double lateral_coupling(double yaw_rate, const PrimitiveConfig& cfg) {
  return cfg.k_lat * std::atan(yaw_rate / cfg.omega_ref);
}

std::vector<Waypoint> rollout(const VelocityCommand& cmd, double horizon, double dt) {
  const int n_steps = static_cast<int>(std::llround(horizon / dt));
  std::vector<Waypoint> waypoints(static_cast<std::size_t>(n_steps) + 1);
  const double omega = cmd.yaw_rate;
  for (int i = 0; i <= n_steps; ++i) {
    const double t = i * dt;
    Waypoint& wp = waypoints[static_cast<std::size_t>(i)];
    wp.t = t;
    wp.yaw = omega * t;
    if (omega == 0.0) {
      wp.position = Vec3(cmd.vx * t, cmd.vy * t, cmd.vz * t);
    } else {
      const double s = std::sin(omega * t);
      const double c = std::cos(omega * t);
      wp.position = Vec3((cmd.vx * s - cmd.vy * (1.0 - c)) / omega,
                         (cmd.vx * (1.0 - c) + cmd.vy * s) / omega, cmd.vz * t);
    }
  }
  return waypoints;
}

std::vector<MotionPrimitive> build_library(const PrimitiveConfig& cfg) {
  cfg.validate();
  std::vector<MotionPrimitive> library;
  library.reserve(PrimitiveConfig::kZBins * PrimitiveConfig::kYawBins);
  for (int z_bin = 0; z_bin < PrimitiveConfig::kZBins; ++z_bin) {
    for (int yaw_bin = 0; yaw_bin < PrimitiveConfig::kYawBins; ++yaw_bin) {
      MotionPrimitive p;
      p.z_bin = z_bin;
      p.yaw_bin = yaw_bin;
      p.command.vx = cfg.vx_nominal;
      p.command.vz = cfg.vz_values[static_cast<std::size_t>(z_bin)];
      p.command.yaw_rate = cfg.yaw_rates[static_cast<std::size_t>(yaw_bin)];
      p.command.vy = lateral_coupling(p.command.yaw_rate, cfg);
      p.waypoints = rollout(p.command, cfg.horizon, cfg.dt_rollout);
      library.push_back(std::move(p));
    }
  }
  return library;
}

std::vector<Waypoint> to_world(const MotionPrimitive& primitive, const Eigen::Isometry3d& pose) {
  std::vector<Waypoint> out = primitive.waypoints;
  const double yaw = pose_yaw(pose);
  for (Waypoint& wp : out) {
    wp.position = pose * wp.position;
    wp.yaw = wrap_angle(wp.yaw + yaw);
  }
  return out;
}

}  // namespace fnav
