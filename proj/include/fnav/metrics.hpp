#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fnav/sim.hpp"
#include "fnav/world.hpp"

namespace fnav {

struct FlightMetrics {
  double displacement = 0.0;    // m, start to end point
  double avg_vel_disp = 0.0;    // m/s, displacement over elapsed time
  double avg_odom_vel = 0.0;    // m/s, mean speed over ticks
  double avg_accel = 0.0;       // m/s^2, mean |a| via central differences
  double smoothness_rms = 0.0;  // m/s^2, RMS of 0.5 s moving-average |a|
  bool success = false;
};

// Throws std::invalid_argument on logs with fewer than two ticks.
FlightMetrics compute_metrics(const FlightLog& log);

struct CampaignConfig {
  int n_flights = 15;
  DensityClass environment = DensityClass::medium;
  double target_velocity = 1.0;  // m/s
  std::uint64_t base_seed = 1;
  int jobs = 1;  // flights evaluated in parallel; results are order-independent
};

struct CampaignResult {
  CampaignConfig config;
  std::vector<FlightMetrics> flights;
  std::vector<Outcome> outcomes;
  FlightMetrics mean;
  FlightMetrics stddev;  // population standard deviation
  int successes = 0;

  std::string success_fraction() const;  // e.g. "12/15"
};

// Per-flight world seeded base_seed + index, start/goal clearings carved,
// one flight per seed; summary row recomputed from the per-flight rows.
CampaignResult run_campaign(const CampaignConfig& cfg, const PipelineConfig& base);

// Same computation for a caller-provided set of logs (used by tooling).
CampaignResult summarize_campaign(const CampaignConfig& cfg, const std::vector<FlightLog>& logs);

// CSV with the table column set: Flight, Disp. [m], Avg. Vel. Disp. [m/s],
// Avg. Odom. Vel. [m/s], Avg. Accel. [m/s^2], Smoothness_RMS [m/s^2],
// Successful; one row per flight plus a mean +- sd summary row whose last
// column is the success fraction.
void write_campaign_csv(const CampaignResult& result, std::ostream& out);

// World prepared the way the campaign does it: class preset, given seed,
// clearings around start and goal.
ForestWorld make_campaign_world(DensityClass environment, std::uint64_t seed,
                                const MissionConfig& mission);

}  // namespace fnav
