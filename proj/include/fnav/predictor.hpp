#pragma once

#include <vector>

#include "fnav/camera.hpp"
#include "fnav/depth_image.hpp"
#include "fnav/primitives.hpp"
#include "fnav/unscented.hpp"

namespace fnav {

// Partial state consumed by the risk predictor: body-frame velocity plus
// roll/pitch, with uncertainty over (vx, vy, vz, roll, pitch).
struct StateEstimate {
  Vec3 velocity{0, 0, 0};  // m/s, body frame
  double roll = 0.0;       // rad
  double pitch = 0.0;      // rad
  Eigen::Matrix<double, 5, 5> covariance = Eigen::Matrix<double, 5, 5>::Zero();
};

// One collision probability per primitive, in library order.
using RiskVector = std::vector<double>;

struct PredictorConfig {
  double inflated_radius = 0.35;     // m: physical radius plus safety margin
  double risk_steepness = 5.0;       // 1/m on penetration depth
  int n_members = 3;
  double member_radius_jitter = 0.05;  // m spread across ensemble members
  double out_of_view_risk = 0.1;     // floor once a rollout leaves the FOV
  double control_latency = 0.1;      // s: rollout start advanced by v * latency
  UtParams ut;
};

// Depth-based geometric risk: waypoints are shifted by the latency bias,
// tilted by the state attitude, projected into the image and compared
// against the local (3x3 minimum) depth. Residual undefined pixels are
// treated as far; the supervisor provides the independent safety net.
RiskVector predict_geometric(const DepthImage& depth, const StateEstimate& state,
                             const std::vector<MotionPrimitive>& library, const CameraModel& camera,
                             const PredictorConfig& cfg);

// Consensus of n_members geometric predictors whose inflated radii are
// spread symmetrically by member_radius_jitter.
RiskVector ensemble_predict(const DepthImage& depth, const StateEstimate& state,
                            const std::vector<MotionPrimitive>& library, const CameraModel& camera,
                            const PredictorConfig& cfg);

// Unscented propagation of the state uncertainty through the ensemble:
// sigma-point velocity deviations shift the rollout proportionally to
// time, attitude deviations tilt the waypoints before projection.
RiskVector ut_predict(const DepthImage& depth, const StateEstimate& state,
                      const std::vector<MotionPrimitive>& library, const CameraModel& camera,
                      const PredictorConfig& cfg);

}  // namespace fnav
