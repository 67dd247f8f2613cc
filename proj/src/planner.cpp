#include "fnav/planner.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace fnav {

int yaw_sign(double yaw_rate, const PlannerConfig& cfg) {
  if (yaw_rate > cfg.yaw_sign_deadband) return 1;
  if (yaw_rate < -cfg.yaw_sign_deadband) return -1;
  return 0;
}

void update_stabilization(PlannerState& state, const PlannerConfig& cfg) {
  int changes = 0;
  int previous = 0;
  double sum = 0.0;
  for (const double yaw : state.yaw_history) {
    sum += yaw;
    const int s = yaw_sign(yaw, cfg);
    if (s == 0) continue;
    if (previous != 0 && s != previous) ++changes;
    previous = s;
  }
  if (!state.bias_active && changes > cfg.k_osc) {
    state.bias_active = true;
    state.bias_sign = sum < 0.0 ? -1 : 1;
    state.no_change_streak = 0;
  }
}

double stabilization_penalty(const PlannerState& state, const PlannerConfig& cfg,
                             double candidate_yaw) {
  if (!state.bias_active) return 0.0;
  const int s = yaw_sign(candidate_yaw, cfg);
  if (s == 0 || s == state.bias_sign) return 0.0;
  return cfg.w_bias;
}

VelocityCommand dead_end_command(PlannerState& state, const PlannerConfig& cfg) {
  if (state.bias_active) {
    state.rotate_dir = state.bias_sign;
  } else {
    for (auto it = state.yaw_history.rbegin(); it != state.yaw_history.rend(); ++it) {
      const int s = yaw_sign(*it, cfg);
      if (s != 0) {
        state.rotate_dir = s;
        break;
      }
    }
  }
  return {0.0, 0.0, 0.0, state.rotate_dir * cfg.omega_rot};
}

namespace {

void record_command(PlannerState& state, const PlannerConfig& cfg, double commanded_yaw) {
  const int previous =
      state.yaw_history.empty() ? 0 : yaw_sign(state.yaw_history.back(), cfg);
  const int current = yaw_sign(commanded_yaw, cfg);
  const bool flipped = previous != 0 && current != 0 && previous != current;
  state.no_change_streak = flipped ? 0 : state.no_change_streak + 1;
  if (state.bias_active && state.no_change_streak >= cfg.clear_after) state.bias_active = false;

  state.yaw_history.push_back(commanded_yaw);
  while (state.yaw_history.size() > static_cast<std::size_t>(cfg.window))
    state.yaw_history.pop_front();
}

}  // namespace

Decision select_action(const RiskVector& risks, const SafeActionSet& safe_set, const GoalSpec& goal,
                       const Eigen::Isometry3d& pose, const std::vector<MotionPrimitive>& library,
                       PlannerState& state, const PlannerConfig& cfg) {
  if (risks.size() != library.size() || safe_set.safe.size() != library.size())
    throw std::invalid_argument("risk/safe-set size does not match the library");

  update_stabilization(state, cfg);

  Decision decision;
  decision.safe_count = safe_set.count;

  double min_safe_risk = std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < risks.size(); ++p)
    if (safe_set.contains(p)) min_safe_risk = std::min(min_safe_risk, risks[p]);

  if (safe_set.count == 0) {
    decision.command = dead_end_command(state, cfg);
    decision.dead_end = true;
    decision.bias_active = state.bias_active;
    decision.bias_sign = state.bias_sign;
    record_command(state, cfg, decision.command.yaw_rate);
    return decision;
  }

  const Vec3 position = pose.translation();
  const double yaw = pose_yaw(pose);
  const double bearing =
      std::atan2(goal.goal_position.y() - position.y(), goal.goal_position.x() - position.x());

  int best = -1;
  double best_cost = 0.0, best_abs_yaw = 0.0;
  for (std::size_t p = 0; p < risks.size(); ++p) {
    if (!safe_set.contains(p)) continue;
    if (risks[p] > min_safe_risk + cfg.risk_band) continue;
    ++decision.candidate_count;

    const MotionPrimitive& primitive = library[p];
    const Waypoint& final_wp = primitive.waypoints.back();
    const double heading_after = wrap_angle(yaw + final_wp.yaw);
    const double altitude_after = position.z() + final_wp.position.z();
    const double cost = cfg.w_dir * std::fabs(wrap_angle(bearing - heading_after)) +
                        cfg.w_alt * std::fabs(goal.goal_altitude - altitude_after) +
                        stabilization_penalty(state, cfg, primitive.command.yaw_rate);

    const double abs_yaw = std::fabs(primitive.command.yaw_rate);
    bool better = false;
    if (best < 0 || cost < best_cost) {
      better = true;
    } else if (cost == best_cost) {
      // deterministic chain: |yaw_rate|, then z_bin, then index
      if (abs_yaw < best_abs_yaw) better = true;
      else if (abs_yaw == best_abs_yaw && primitive.z_bin < library[static_cast<std::size_t>(best)].z_bin)
        better = true;
    }
    if (better) {
      best = static_cast<int>(p);
      best_cost = cost;
      best_abs_yaw = abs_yaw;
    }
  }

  decision.selected_index = best;
  decision.command = library[static_cast<std::size_t>(best)].command;
  decision.risk = risks[static_cast<std::size_t>(best)];
  decision.bias_active = state.bias_active;
  decision.bias_sign = state.bias_sign;
  record_command(state, cfg, decision.command.yaw_rate);
  return decision;
}

}  // namespace fnav
