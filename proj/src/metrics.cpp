#include "fnav/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <ostream>
#include <stdexcept>

namespace fnav {

FlightMetrics compute_metrics(const FlightLog& log) {
  const std::size_t n = log.ticks.size();
  if (n < 2) throw std::invalid_argument("metrics need at least two ticks");

  FlightMetrics m;
  const Vec3 p_start = log.ticks.front().state.position;
  const Vec3 p_end = log.ticks.back().state.position;
  const double t_span = log.ticks.back().t - log.ticks.front().t;
  m.displacement = (p_end - p_start).norm();
  m.avg_vel_disp = m.displacement / t_span;

  double speed_sum = 0.0;
  for (const TickRecord& r : log.ticks) speed_sum += r.state.velocity.norm();
  m.avg_odom_vel = speed_sum / static_cast<double>(n);

  const double dt = log.ticks[1].t - log.ticks[0].t;
  std::vector<double> accel(n);
  auto v = [&](std::size_t i) -> const Vec3& { return log.ticks[i].state.velocity; };
  accel[0] = (v(1) - v(0)).norm() / dt;
  accel[n - 1] = (v(n - 1) - v(n - 2)).norm() / dt;
  for (std::size_t i = 1; i + 1 < n; ++i) accel[i] = (v(i + 1) - v(i - 1)).norm() / (2.0 * dt);

  double accel_sum = 0.0;
  for (const double a : accel) accel_sum += a;
  m.avg_accel = accel_sum / static_cast<double>(n);

  // 0.5 s centered moving average of |a|, then RMS.
  const int half = std::max(1, static_cast<int>(std::llround(0.25 / dt)));
  double sq_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i >= static_cast<std::size_t>(half) ? i - half : 0;
    const std::size_t hi = std::min(n - 1, i + static_cast<std::size_t>(half));
    double window_sum = 0.0;
    for (std::size_t k = lo; k <= hi; ++k) window_sum += accel[k];
    const double smoothed = window_sum / static_cast<double>(hi - lo + 1);
    sq_sum += smoothed * smoothed;
  }
  m.smoothness_rms = std::sqrt(sq_sum / static_cast<double>(n));
  m.success = log.outcome == Outcome::success;
  return m;
}

ForestWorld make_campaign_world(DensityClass environment, std::uint64_t seed,
                                const MissionConfig& mission) {
  ForestWorld world = generate_world(world_config_for_class(environment, seed));
  carve_clearing(world, mission.start, 1.5);
  carve_clearing(world, mission.goal, 1.5);
  return world;
}

std::string CampaignResult::success_fraction() const {
  return std::to_string(successes) + "/" + std::to_string(flights.size());
}

CampaignResult summarize_campaign(const CampaignConfig& cfg, const std::vector<FlightLog>& logs) {
  CampaignResult result;
  result.config = cfg;
  for (const FlightLog& log : logs) {
    result.flights.push_back(compute_metrics(log));
    result.outcomes.push_back(log.outcome);
    if (log.outcome == Outcome::success) ++result.successes;
  }

  const double n = static_cast<double>(result.flights.size());
  auto accumulate = [&](auto field) {
    double sum = 0.0;
    for (const FlightMetrics& f : result.flights) sum += f.*field;
    const double mean = sum / n;
    double var = 0.0;
    for (const FlightMetrics& f : result.flights) var += (f.*field - mean) * (f.*field - mean);
    return std::pair<double, double>(mean, std::sqrt(var / n));
  };
  std::tie(result.mean.displacement, result.stddev.displacement) =
      accumulate(&FlightMetrics::displacement);
  std::tie(result.mean.avg_vel_disp, result.stddev.avg_vel_disp) =
      accumulate(&FlightMetrics::avg_vel_disp);
  std::tie(result.mean.avg_odom_vel, result.stddev.avg_odom_vel) =
      accumulate(&FlightMetrics::avg_odom_vel);
  std::tie(result.mean.avg_accel, result.stddev.avg_accel) = accumulate(&FlightMetrics::avg_accel);
  std::tie(result.mean.smoothness_rms, result.stddev.smoothness_rms) =
      accumulate(&FlightMetrics::smoothness_rms);
  return result;
}

CampaignResult run_campaign(const CampaignConfig& cfg, const PipelineConfig& base) {
  if (cfg.n_flights < 1) throw std::invalid_argument("campaign needs at least one flight");

  PipelineConfig pipeline = base;
  pipeline.primitives = PrimitiveConfig::defaults(cfg.target_velocity);

  auto fly = [&](int index) {
    const std::uint64_t seed = cfg.base_seed + static_cast<std::uint64_t>(index);
    const ForestWorld world = make_campaign_world(cfg.environment, seed, pipeline.mission);
    return run_flight(world, pipeline, seed);
  };

  std::vector<FlightLog> logs(static_cast<std::size_t>(cfg.n_flights));
  if (cfg.jobs <= 1) {
    for (int i = 0; i < cfg.n_flights; ++i) logs[static_cast<std::size_t>(i)] = fly(i);
  } else {
    std::vector<std::future<FlightLog>> pending;
    pending.reserve(static_cast<std::size_t>(cfg.n_flights));
    int next = 0;
    // bounded pool: at most `jobs` flights in flight at once
    std::vector<std::pair<int, std::future<FlightLog>>> running;
    while (next < cfg.n_flights || !running.empty()) {
      while (next < cfg.n_flights && static_cast<int>(running.size()) < cfg.jobs) {
        running.emplace_back(next, std::async(std::launch::async, fly, next));
        ++next;
      }
      auto& [index, future] = running.front();
      logs[static_cast<std::size_t>(index)] = future.get();
      running.erase(running.begin());
    }
  }
  return summarize_campaign(cfg, logs);
}

void write_campaign_csv(const CampaignResult& result, std::ostream& out) {
  out << "Flight,Disp. [m],Avg. Vel. Disp. [m/s],Avg. Odom. Vel. [m/s],Avg. Accel. [m/s^2],"
         "Smoothness_RMS [m/s^2],Successful\n";
  char buf[256];
  for (std::size_t i = 0; i < result.flights.size(); ++i) {
    const FlightMetrics& f = result.flights[i];
    std::snprintf(buf, sizeof(buf), "Flight %zu,%.4f,%.4f,%.4f,%.4f,%.4f,%s\n", i + 1,
                  f.displacement, f.avg_vel_disp, f.avg_odom_vel, f.avg_accel, f.smoothness_rms,
                  f.success ? "Yes" : "No");
    out << buf;
  }
  std::snprintf(buf, sizeof(buf),
                "Mean +- SD,%.4f +- %.4f,%.4f +- %.4f,%.4f +- %.4f,%.4f +- %.4f,%.4f +- %.4f,%s\n",
                result.mean.displacement, result.stddev.displacement, result.mean.avg_vel_disp,
                result.stddev.avg_vel_disp, result.mean.avg_odom_vel, result.stddev.avg_odom_vel,
                result.mean.avg_accel, result.stddev.avg_accel, result.mean.smoothness_rms,
                result.stddev.smoothness_rms, result.success_fraction().c_str());
  out << buf;
}

}  // namespace fnav
