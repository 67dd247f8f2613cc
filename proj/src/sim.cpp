#include "fnav/sim.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "fnav/depth_render.hpp"
#include "fnav/encoder.hpp"
#include "fnav/rng.hpp"

namespace fnav {

void MissionConfig::validate() const {
  if (sensor_hz <= 0 || plan_hz <= 0 || sensor_hz % plan_hz != 0)
    throw std::invalid_argument("plan_hz must divide sensor_hz");
  if (!(goal_tolerance > 0.0) || !(time_limit > 0.0))
    throw std::invalid_argument("tolerances must be positive");
  if (!(tau_v > 0.0) || !(tau_yaw > 0.0) || !(a_max > 0.0))
    throw std::invalid_argument("dynamics constants must be positive");
}

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::success: return "success";
    case Outcome::collision: return "collision";
    case Outcome::timeout: return "timeout";
  }
  return "timeout";
}

DroneState step_dynamics(const DroneState& state, const VelocityCommand& cmd, double dt,
                         const MissionConfig& cfg) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  DroneState next = state;

  const double c = std::cos(state.yaw), s = std::sin(state.yaw);
  const Vec3 v_des(cmd.vx * c - cmd.vy * s, cmd.vx * s + cmd.vy * c, cmd.vz);

  // Exact discretization of the first-order lag, with the step clamped so
  // acceleration never exceeds a_max.
  const double gain = 1.0 - std::exp(-dt / cfg.tau_v);
  Vec3 dv = (v_des - state.velocity) * gain;
  const double dv_max = cfg.a_max * dt;
  const double dv_norm = dv.norm();
  if (dv_norm > dv_max) dv *= dv_max / dv_norm;
  next.velocity = state.velocity + dv;
  next.position = state.position + next.velocity * dt;

  const double yaw_gain = 1.0 - std::exp(-dt / cfg.tau_yaw);
  next.yaw_rate = state.yaw_rate + (cmd.yaw_rate - state.yaw_rate) * yaw_gain;
  next.yaw = wrap_angle(state.yaw + next.yaw_rate * dt);
  next.t = state.t + dt;
  return next;
}

bool FlightLog::identical(const FlightLog& other) const {
  return outcome == other.outcome && duration == other.duration && ticks == other.ticks;
}

namespace {

void csv_row(std::ostream& out, const TickRecord& r) {
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,"
                "%.17g,%d,%.17g,%d,%d,%d,%d\n",
                r.t, r.state.position.x(), r.state.position.y(), r.state.position.z(),
                r.state.velocity.x(), r.state.velocity.y(), r.state.velocity.z(), r.state.yaw,
                r.state.yaw_rate, r.command.vx, r.command.vy, r.command.vz, r.command.yaw_rate,
                r.clearance, r.decision.selected_index, r.decision.risk, r.decision.safe_count,
                r.decision.candidate_count, r.decision.bias_active ? 1 : 0,
                r.decision.dead_end ? 1 : 0);
  out << buf;
}

}  // namespace

void FlightLog::write_csv(std::ostream& out) const {
  out << "t,px,py,pz,vx,vy,vz,yaw,yaw_rate,cmd_vx,cmd_vy,cmd_vz,cmd_yaw_rate,min_clearance,"
         "sel_index,sel_risk,safe_count,candidate_count,bias_active,dead_end\n";
  for (const TickRecord& r : ticks) csv_row(out, r);
}

void FlightLog::write_path(std::ostream& out) const {
  char buf[128];
  for (const TickRecord& r : ticks) {
    std::snprintf(buf, sizeof(buf), "%.6f %.6f %.6f\n", r.state.position.x(), r.state.position.y(),
                  r.state.position.z());
    out << buf;
  }
}

FlightLog run_flight(const ForestWorld& world, const PipelineConfig& cfg, std::uint64_t seed,
                     FlightObserver* observer) {
  cfg.mission.validate();
  const MissionConfig& mission = cfg.mission;

  if (min_clearance(world, mission.start, mission.physical_radius) <= 0.0)
    throw std::runtime_error("flight start position is inside an obstacle");

  const std::vector<MotionPrimitive> library = build_library(cfg.primitives);
  const DepthRenderer renderer(world, cfg.camera);
  const SectorGrid grid = SectorGrid::from_camera(cfg.camera);

  DroneState state;
  state.position = mission.start;
  state.yaw = std::atan2(mission.goal.y() - mission.start.y(), mission.goal.x() - mission.start.x());

  GoalSpec goal{mission.goal, mission.goal.z()};
  PlannerState planner_state;
  VelocityCommand active_command;  // hover until the first decision
  Decision last_decision;

  FlightLog log;
  const double dt = 1.0 / mission.sensor_hz;
  const int plan_every = mission.sensor_hz / mission.plan_hz;
  const int max_ticks = static_cast<int>(std::ceil(mission.time_limit * mission.sensor_hz));
  log.ticks.reserve(static_cast<std::size_t>(max_ticks));

  for (int tick = 0; tick < max_ticks; ++tick) {
    if (tick % plan_every == 0) {
      const Eigen::Isometry3d pose = make_pose(state.position, state.yaw);
      const DepthImage raw = renderer.render(pose);

      NoiseConfig noise = cfg.noise;
      noise.seed = derive_seed(seed, 0x6672616d65ULL, static_cast<std::uint64_t>(tick));
      const DepthImage corrupted = corrupt_depth(raw, noise, cfg.camera.max_range);
      const DepthImage refined = improve_depth(corrupted, cfg.improve);

      encode(refined, cfg.camera.max_range);  // latent interface kept warm for the timing budget

      StateEstimate estimate;
      const double c = std::cos(state.yaw), s = std::sin(state.yaw);
      estimate.velocity = Vec3(c * state.velocity.x() + s * state.velocity.y(),
                               -s * state.velocity.x() + c * state.velocity.y(),
                               state.velocity.z());
      if (mission.odom_noise_sigma > 0.0) {
        Rng odom(derive_seed(seed, 0x6f646f6dULL, static_cast<std::uint64_t>(tick)));
        for (int axis = 0; axis < 3; ++axis)
          estimate.velocity[axis] += mission.odom_noise_sigma * odom.normal();
        const double var = mission.odom_noise_sigma * mission.odom_noise_sigma;
        estimate.covariance.topLeftCorner<3, 3>() = var * Eigen::Matrix3d::Identity();
      }

      const RiskVector risks =
          mission.use_ut ? ut_predict(refined, estimate, library, cfg.camera, cfg.predictor)
                         : ensemble_predict(refined, estimate, library, cfg.camera, cfg.predictor);

      BlockedMask mask = compute_blocked(refined, grid, cfg.supervisor);
      expand_margins(mask, grid, cfg.supervisor);
      const SafeActionSet safe = filter_actions(mask, library, grid, cfg.supervisor.lookahead);

      last_decision = select_action(risks, safe, goal, pose, library, planner_state, cfg.planner);
      active_command = last_decision.command;
      if (observer != nullptr)
        observer->on_decision(tick / plan_every, raw, refined, mask, last_decision);
    }

    state = step_dynamics(state, active_command, dt, mission);

    TickRecord record;
    record.t = state.t;
    record.state = state;
    record.command = active_command;
    record.clearance = min_clearance(world, state.position, mission.physical_radius);
    record.decision = last_decision;
    log.ticks.push_back(record);

    if (record.clearance < 0.0) {
      log.outcome = Outcome::collision;
      break;
    }
    if ((state.position - mission.goal).norm() <= mission.goal_tolerance) {
      log.outcome = Outcome::success;
      break;
    }
    if (state.t >= mission.time_limit) {
      log.outcome = Outcome::timeout;
      break;
    }
  }
  if (log.ticks.empty()) throw std::runtime_error("flight produced no ticks");
  log.duration = log.ticks.back().t;
  return log;
}

}  // namespace fnav
