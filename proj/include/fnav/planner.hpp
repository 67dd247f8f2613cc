#pragma once

#include <deque>

#include "fnav/predictor.hpp"
#include "fnav/primitives.hpp"
#include "fnav/supervisor.hpp"

namespace fnav {

struct GoalSpec {
  Vec3 goal_position{0, 0, 0};  // world frame
  double goal_altitude = 0.0;   // m
};

struct PlannerConfig {
  double risk_band = 0.05;   // candidates within this of the lowest safe risk
  double w_dir = 1.0;        // 1/rad
  double w_alt = 1.0;        // 1/m
  double w_bias = 0.5;
  int window = 10;           // decisions kept in the yaw history
  int k_osc = 3;             // sign changes that trigger the bias
  int clear_after = 5;       // consecutive no-change decisions that clear it
  double omega_rot = 0.6;    // rad/s dead-end rotation rate
  // Yaw commands at or below this magnitude count as sign-neutral, so the
  // dither between the two innermost yaw bins is not treated as indecision.
  double yaw_sign_deadband = 0.05;
};

struct PlannerState {
  std::deque<double> yaw_history;  // most recent last
  bool bias_active = false;
  int bias_sign = 1;
  int rotate_dir = 1;
  int no_change_streak = 0;
};

// Outcome of one decision, logged per planning cycle.
struct Decision {
  VelocityCommand command;
  int selected_index = -1;  // -1 on dead end
  double risk = 0.0;
  int safe_count = 0;
  int candidate_count = 0;
  bool dead_end = false;
  bool bias_active = false;
  int bias_sign = 1;
};

// Sign with the deadband applied: -1, 0 or +1.
int yaw_sign(double yaw_rate, const PlannerConfig& cfg);

// Oscillation bookkeeping run once per decision before scoring: engages
// the directional bias when the recent yaw history flips sign too often,
// clears it after a stretch of consistent decisions.
void update_stabilization(PlannerState& state, const PlannerConfig& cfg);

// Penalty for a candidate yaw under the current bias state.
double stabilization_penalty(const PlannerState& state, const PlannerConfig& cfg,
                             double candidate_yaw);

// Stop-and-rotate recovery command toward the remembered direction.
VelocityCommand dead_end_command(PlannerState& state, const PlannerConfig& cfg);

// Picks the lowest-cost primitive among the safest candidates (risk within
// risk_band of the best safe risk): cost combines goal-direction error,
// altitude error and the stabilization penalty. Falls back to the dead-end
// command when nothing is safe. Fully deterministic tie-breaking.
Decision select_action(const RiskVector& risks, const SafeActionSet& safe_set, const GoalSpec& goal,
                       const Eigen::Isometry3d& pose, const std::vector<MotionPrimitive>& library,
                       PlannerState& state, const PlannerConfig& cfg);

}  // namespace fnav
