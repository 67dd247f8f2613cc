#include "fnav/predictor.hpp"

#include <algorithm>
#include <cmath>

namespace fnav {

namespace {

// Minimum defined depth in the 3x3 neighborhood; far if none defined.
double local_depth(const DepthImage& depth, int u, int v, double max_range) {
  float best = std::numeric_limits<float>::infinity();
  const int u0 = std::max(0, u - 1), u1 = std::min(depth.width - 1, u + 1);
  const int v0 = std::max(0, v - 1), v1 = std::min(depth.height - 1, v + 1);
  for (int vv = v0; vv <= v1; ++vv)
    for (int uu = u0; uu <= u1; ++uu) {
      const float value = depth.at(uu, vv);
      if (DepthImage::defined(value)) best = std::min(best, value);
    }
  return best == std::numeric_limits<float>::infinity() ? max_range : static_cast<double>(best);
}

// Shared evaluation: one pass over waypoints, one risk per inflated radius.
// Used by all predictor entry points so ensemble members and sigma points
// agree bit-for-bit with the equivalent standalone evaluations.
void predict_radii(const DepthImage& depth, const std::vector<MotionPrimitive>& library,
                   const CameraModel& camera, const PredictorConfig& cfg, const Vec3& velocity,
                   const Vec3& rollout_velocity_delta, double roll, double pitch,
                   const std::vector<double>& radii, std::vector<RiskVector>& out) {
  const Eigen::Isometry3d cam_from_body = camera.mount_pose.inverse();
  const Eigen::Matrix3d tilt =
      (Eigen::AngleAxisd(pitch, Vec3::UnitY()) * Eigen::AngleAxisd(roll, Vec3::UnitX()))
          .toRotationMatrix();
  const Vec3 latency_bias = velocity * cfg.control_latency;

  out.assign(radii.size(), RiskVector(library.size(), 0.0));

  for (std::size_t p = 0; p < library.size(); ++p) {
    const MotionPrimitive& primitive = library[p];
    std::vector<double> max_pen(radii.size(), 0.0);
    bool out_of_view = false;

    for (const Waypoint& wp : primitive.waypoints) {
      if (wp.t == 0.0) continue;  // decision-time position carries no information
      const Vec3 body_point = tilt * (wp.position + latency_bias + rollout_velocity_delta * wp.t);
      const Vec3 cam_point = cam_from_body * body_point;
      const auto px = camera.project(cam_point);
      if (!px || !camera.contains(*px)) {
        out_of_view = true;
        break;  // the risk floor covers everything from here onward
      }
      const double range = cam_point.norm();
      const double obstacle =
          local_depth(depth, static_cast<int>(px->x()), static_cast<int>(px->y()), camera.max_range);
      for (std::size_t k = 0; k < radii.size(); ++k) {
        const double pen = range + radii[k] - obstacle;
        if (pen > max_pen[k]) max_pen[k] = pen;
      }
    }

    for (std::size_t k = 0; k < radii.size(); ++k) {
      double risk = 1.0 - std::exp(-cfg.risk_steepness * max_pen[k]);
      if (out_of_view) risk = std::max(risk, cfg.out_of_view_risk);
      out[k][p] = std::clamp(risk, 0.0, 1.0);
    }
  }
}

std::vector<double> member_radii(const PredictorConfig& cfg) {
  std::vector<double> radii;
  if (cfg.n_members <= 1 || cfg.member_radius_jitter == 0.0) {
    // identical members average to themselves; evaluate once so the
    // consensus is bit-equal to the single predictor
    radii.push_back(cfg.inflated_radius);
    return radii;
  }
  const double step = 2.0 * cfg.member_radius_jitter / (cfg.n_members - 1);
  for (int k = 0; k < cfg.n_members; ++k)
    radii.push_back(cfg.inflated_radius - cfg.member_radius_jitter + k * step);
  return radii;
}

RiskVector ensemble_at(const DepthImage& depth, const std::vector<MotionPrimitive>& library,
                       const CameraModel& camera, const PredictorConfig& cfg, const Vec3& velocity,
                       const Vec3& rollout_velocity_delta, double roll, double pitch) {
  const std::vector<double> radii = member_radii(cfg);
  std::vector<RiskVector> members;
  predict_radii(depth, library, camera, cfg, velocity, rollout_velocity_delta, roll, pitch, radii,
                members);
  RiskVector mean(library.size(), 0.0);
  for (const RiskVector& member : members)
    for (std::size_t p = 0; p < mean.size(); ++p) mean[p] += member[p];
  for (double& value : mean) value /= static_cast<double>(members.size());
  return mean;
}

}  // namespace

RiskVector predict_geometric(const DepthImage& depth, const StateEstimate& state,
                             const std::vector<MotionPrimitive>& library, const CameraModel& camera,
                             const PredictorConfig& cfg) {
  std::vector<RiskVector> out;
  predict_radii(depth, library, camera, cfg, state.velocity, Vec3::Zero(), state.roll, state.pitch,
                {cfg.inflated_radius}, out);
  return out.front();
}

RiskVector ensemble_predict(const DepthImage& depth, const StateEstimate& state,
                            const std::vector<MotionPrimitive>& library, const CameraModel& camera,
                            const PredictorConfig& cfg) {
  return ensemble_at(depth, library, camera, cfg, state.velocity, Vec3::Zero(), state.roll,
                     state.pitch);
}

RiskVector ut_predict(const DepthImage& depth, const StateEstimate& state,
                      const std::vector<MotionPrimitive>& library, const CameraModel& camera,
                      const PredictorConfig& cfg) {
  Eigen::VectorXd mean(5);
  mean << state.velocity.x(), state.velocity.y(), state.velocity.z(), state.roll, state.pitch;

  const auto evaluate = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    const Vec3 velocity(x[0], x[1], x[2]);
    const RiskVector risks = ensemble_at(depth, library, camera, cfg, velocity,
                                         velocity - state.velocity, x[3], x[4]);
    return Eigen::Map<const Eigen::VectorXd>(risks.data(), static_cast<Eigen::Index>(risks.size()));
  };

  const Eigen::VectorXd combined = unscented_mean(mean, state.covariance, evaluate, cfg.ut);
  RiskVector out(library.size());
  for (std::size_t p = 0; p < out.size(); ++p)
    out[p] = std::clamp(combined[static_cast<Eigen::Index>(p)], 0.0, 1.0);
  return out;
}

}  // namespace fnav
