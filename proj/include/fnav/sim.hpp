#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fnav/camera.hpp"
#include "fnav/depth_pipeline.hpp"
#include "fnav/planner.hpp"
#include "fnav/predictor.hpp"
#include "fnav/primitives.hpp"
#include "fnav/supervisor.hpp"
#include "fnav/world.hpp"

namespace fnav {

struct DroneState {
  Vec3 position{0, 0, 0};  // world frame
  Vec3 velocity{0, 0, 0};  // world frame
  double yaw = 0.0;        // wrapped to (-pi, pi]
  double yaw_rate = 0.0;
  double t = 0.0;

  bool operator==(const DroneState& o) const {
    return position == o.position && velocity == o.velocity && yaw == o.yaw &&
           yaw_rate == o.yaw_rate && t == o.t;
  }
};

struct MissionConfig {
  Vec3 start{10.0, 18.0, 1.2};
  Vec3 goal{70.0, 18.0, 1.2};  // 60 m ahead by default
  double goal_tolerance = 1.5;  // m
  double time_limit = 180.0;    // s
  int sensor_hz = 30;
  int plan_hz = 10;
  double tau_v = 0.3;    // s, velocity tracking constant
  double tau_yaw = 0.2;  // s, yaw-rate tracking constant
  double a_max = 3.0;    // m/s^2
  double physical_radius = 0.20;  // m, collision is judged against this
  double odom_noise_sigma = 0.0;  // m/s, optional velocity-estimate noise
  bool use_ut = false;            // propagate odometry uncertainty via sigma points

  void validate() const;  // throws std::invalid_argument
};

// Every per-module configuration a flight needs, bundled for determinism:
// a flight is a pure function of (world, PipelineConfig, seed).
struct PipelineConfig {
  CameraModel camera;
  NoiseConfig noise;
  ImproveConfig improve;
  PrimitiveConfig primitives = PrimitiveConfig::defaults();
  PredictorConfig predictor;
  SupervisorConfig supervisor;
  PlannerConfig planner;
  MissionConfig mission;
};

enum class Outcome { success, collision, timeout };
std::string to_string(Outcome o);

struct TickRecord {
  double t = 0.0;
  DroneState state;       // after this tick's dynamics step
  VelocityCommand command;  // active (latched) command during the step
  double clearance = 0.0;   // min_clearance at the physical radius
  Decision decision;        // most recent planner decision

  bool operator==(const TickRecord& o) const {
    return t == o.t && state == o.state && command == o.command && clearance == o.clearance &&
           decision.selected_index == o.decision.selected_index && decision.risk == o.decision.risk &&
           decision.safe_count == o.decision.safe_count &&
           decision.candidate_count == o.decision.candidate_count &&
           decision.dead_end == o.decision.dead_end &&
           decision.bias_active == o.decision.bias_active;
  }
};

struct FlightLog {
  std::vector<TickRecord> ticks;
  Outcome outcome = Outcome::timeout;
  double duration = 0.0;

  bool identical(const FlightLog& other) const;
  void write_csv(std::ostream& out) const;
  void write_path(std::ostream& out) const;  // gnuplot-style "x y z" per tick
};

// First-order tracking of a body-frame velocity command: the commanded
// velocity is rotated by the current yaw, approached with the exact
// discrete gain for tau_v and an acceleration clamp, and integrated.
DroneState step_dynamics(const DroneState& state, const VelocityCommand& cmd, double dt,
                         const MissionConfig& cfg);

// Per-decision callback (planning tick index, refined depth, mask, decision).
struct FlightObserver {
  virtual ~FlightObserver() = default;
  virtual void on_decision(int plan_index, const DepthImage& raw, const DepthImage& refined,
                           const BlockedMask& mask, const Decision& decision) = 0;
};

// Closed loop at sensor_hz with planning every sensor_hz/plan_hz ticks.
// Rendering happens only on planning ticks; intermediate frames are never
// consumed and all per-frame randomness is keyed by tick index, so the
// log is identical to the literal every-tick schedule.
FlightLog run_flight(const ForestWorld& world, const PipelineConfig& cfg, std::uint64_t seed,
                     FlightObserver* observer = nullptr);

}  // namespace fnav
