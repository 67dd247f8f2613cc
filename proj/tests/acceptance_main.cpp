// Acceptance suite: one criterion per function, one PASS/FAIL line each.
// Exit status is nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <future>
#include <limits>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "fnav/config.hpp"
#include "fnav/depth_render.hpp"
#include "fnav/encoder.hpp"
#include "fnav/metrics.hpp"
#include "fnav/rng.hpp"
#include "fnav/sim.hpp"

using namespace fnav;
using clock_type = std::chrono::steady_clock;

namespace {

double seconds_since(clock_type::time_point start) {
  return std::chrono::duration<double>(clock_type::now() - start).count();
}

int hardware_jobs() {
  return std::max(1u, std::thread::hardware_concurrency());
}

NoiseConfig no_noise() { return NoiseConfig{0.0, 0, 0.0, 0.0, 0}; }

// ---------------------------------------------------------------- 1 ----

bool criterion_supervisor_equivalence(std::string& detail) {
  const auto start = clock_type::now();
  Rng rng(0xACCE11);
  int failures = 0;
  for (int trial = 0; trial < 500; ++trial) {
    SectorGrid grid;
    grid.n_yaw = rng.uniform_int(6, 48);
    grid.n_z = rng.uniform_int(3, 16);
    const std::size_t n = static_cast<std::size_t>(grid.n_yaw) * grid.n_z;
    BlockedMask mask;
    mask.n_yaw = grid.n_yaw;
    mask.n_z = grid.n_z;
    mask.raw.assign(n, 0);
    mask.expanded.assign(n, 0);
    mask.sector_min_depth.assign(n, std::numeric_limits<double>::infinity());
    for (std::size_t s = 0; s < n; ++s)
      if (rng.uniform() < 0.2) {
        mask.raw[s] = 1;
        mask.sector_min_depth[s] = rng.uniform(0.2, 8.0);
      }
    SupervisorConfig cfg;
    cfg.r = rng.uniform(0.0, 1.0);
    cfg.h_margin = rng.uniform(0.0, 1.2);

    expand_margins(mask, grid, cfg);

    // literal per-sector translation of the margin formulas
    std::vector<std::uint8_t> oracle(mask.raw);
    for (int j = 0; j < grid.n_z; ++j)
      for (int i = 0; i < grid.n_yaw; ++i) {
        if (!mask.raw_at(i, j)) continue;
        const double d = mask.sector_min_depth[static_cast<std::size_t>(grid.index(i, j))];
        const int m_yaw = static_cast<int>(std::ceil(std::atan(cfg.r / d) / grid.delta_yaw()));
        const int m_z =
            static_cast<int>(std::ceil(std::atan(cfg.h_margin / 2.0 / d) / grid.delta_z()));
        for (int k = -m_yaw; k <= m_yaw; ++k)
          for (int l = -m_z; l <= m_z; ++l) {
            const int ii = i + k, jj = j + l;
            if (ii < 0 || ii >= grid.n_yaw || jj < 0 || jj >= grid.n_z) continue;
            oracle[static_cast<std::size_t>(grid.index(ii, jj))] = 1;
          }
      }
    if (mask.expanded != oracle) ++failures;
  }
  const double elapsed = seconds_since(start);
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%d/500 mismatches, %.2f s (budget 5 s)", failures, elapsed);
  detail = buf;
  return failures == 0 && elapsed < 5.0;
}

// ---------------------------------------------------------------- 2 ----

struct ClassOutcomes {
  int collisions = 0;
  int successes = 0;
  int timeouts = 0;
};

ClassOutcomes run_class_flights(DensityClass cls, int n_flights, std::uint64_t base_seed,
                                const PipelineConfig& pipeline, int jobs) {
  std::vector<Outcome> outcomes(static_cast<std::size_t>(n_flights));
  auto fly = [&](int index) {
    const std::uint64_t seed = base_seed + static_cast<std::uint64_t>(index);
    const ForestWorld world = make_campaign_world(cls, seed, pipeline.mission);
    return run_flight(world, pipeline, seed).outcome;
  };
  std::vector<std::pair<int, std::future<Outcome>>> running;
  int next = 0;
  while (next < n_flights || !running.empty()) {
    while (next < n_flights && static_cast<int>(running.size()) < jobs) {
      running.emplace_back(next, std::async(std::launch::async, fly, next));
      ++next;
    }
    auto& [index, future] = running.front();
    outcomes[static_cast<std::size_t>(index)] = future.get();
    running.erase(running.begin());
  }
  ClassOutcomes result;
  for (const Outcome o : outcomes) {
    if (o == Outcome::collision) ++result.collisions;
    else if (o == Outcome::success) ++result.successes;
    else ++result.timeouts;
  }
  return result;
}

bool criterion_end_to_end_safety(std::string& detail) {
  const auto start = clock_type::now();
  PipelineConfig pipeline;
  pipeline.noise = no_noise();
  int collisions = 0;
  std::ostringstream report;
  for (const DensityClass cls :
       {DensityClass::medium, DensityClass::difficult, DensityClass::very_difficult}) {
    const ClassOutcomes o = run_class_flights(cls, 100, 40000, pipeline, hardware_jobs());
    collisions += o.collisions;
    report << to_string(cls) << " " << o.collisions << " collisions (" << o.successes
           << " success/" << o.timeouts << " timeout); ";
  }
  const double elapsed = seconds_since(start);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.0f s (budget 600 s)", elapsed);
  detail = report.str() + buf;
  return collisions == 0 && elapsed < 600.0;
}

// ---------------------------------------------------------------- 3 ----

bool criterion_success_ordering(std::string& detail) {
  PipelineConfig pipeline;  // default degradation model
  const int n = 50;
  const ClassOutcomes medium =
      run_class_flights(DensityClass::medium, n, 50000, pipeline, hardware_jobs());
  const ClassOutcomes difficult =
      run_class_flights(DensityClass::difficult, n, 50000, pipeline, hardware_jobs());
  const ClassOutcomes very_difficult =
      run_class_flights(DensityClass::very_difficult, n, 50000, pipeline, hardware_jobs());
  char buf[160];
  std::snprintf(buf, sizeof(buf), "success %d/%d >= %d/%d >= %d/%d, medium >= 90%%",
                medium.successes, n, difficult.successes, n, very_difficult.successes, n);
  detail = buf;
  return medium.successes >= difficult.successes &&
         difficult.successes >= very_difficult.successes &&
         medium.successes * 10 >= n * 9;
}

// ---------------------------------------------------------------- 4 ----

bool criterion_ut_exactness(std::string& detail) {
  Eigen::MatrixXd a(3, 5);
  a << 1, -2, 0.5, 3, -1, 0.25, 1.5, -0.75, 2, 0.1, -0.6, 0.9, 1.1, -1.3, 0.4;
  Eigen::VectorXd mean(5);
  mean << 0.4, -0.2, 0.1, 0.05, -0.3;
  Eigen::MatrixXd cov = Eigen::MatrixXd::Identity(5, 5) * 0.2;
  cov(0, 1) = cov(1, 0) = 0.05;
  const auto linear = [&a](const Eigen::VectorXd& x) -> Eigen::VectorXd { return a * x; };
  const double linear_err = (unscented_mean(mean, cov, linear) - a * mean).norm();

  const double sigma2 = 0.73;
  Eigen::VectorXd zero(1);
  zero << 0.0;
  Eigen::MatrixXd var(1, 1);
  var << sigma2;
  const auto quad = [](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    Eigen::VectorXd y(1);
    y << x[0] * x[0];
    return y;
  };
  const double quad_err = std::fabs(unscented_mean(zero, var, quad)[0] - sigma2);

  char buf[96];
  std::snprintf(buf, sizeof(buf), "linear err %.2e, quadratic err %.2e (tol 1e-9)", linear_err,
                quad_err);
  detail = buf;
  return linear_err <= 1e-9 && quad_err <= 1e-9;
}

// ---------------------------------------------------------------- 5 ----

bool criterion_predictor_oracle(std::string& detail) {
  const CameraModel camera;
  const PredictorConfig cfg;
  const auto library = build_library(PrimitiveConfig::defaults());
  int flagged = 0, violations = 0;
  for (int scene = 0; scene < 1000; ++scene) {
    WorldConfig wc = world_config_for_class(
        scene % 2 == 0 ? DensityClass::difficult : DensityClass::very_difficult,
        60000 + static_cast<std::uint64_t>(scene));
    wc.extent_x = 20.0;
    wc.extent_y = 20.0;
    ForestWorld world = generate_world(wc);
    const Vec3 start(4.0, 10.0, 1.2);
    carve_clearing(world, start, 1.0);
    const Eigen::Isometry3d pose = make_pose(start, 0.0);
    const DepthImage depth = render_depth(world, pose, camera);
    const RiskVector risks = predict_geometric(depth, {}, library, camera, cfg);

    for (std::size_t p = 0; p < risks.size(); ++p) {
      if (risks[p] <= 0.5) continue;
      ++flagged;
      double worst = std::numeric_limits<double>::infinity();
      for (const Waypoint& wp : library[p].waypoints) {
        if (wp.t == 0.0) continue;
        const Vec3 cam_pt = camera.mount_pose.inverse() * wp.position;
        const auto px = camera.project(cam_pt);
        if (!px || !camera.contains(*px)) break;  // in-FOV prefix only
        worst = std::min(worst, min_clearance(world, pose * wp.position, 0.0));
      }
      if (worst >= cfg.inflated_radius) ++violations;
    }
  }
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%d high-risk rollouts, %d false alarms (tol 0)", flagged,
                violations);
  detail = buf;
  return violations == 0 && flagged > 100;
}

// ---------------------------------------------------------------- 6 ----

bool criterion_depth_improver(std::string& detail) {
  const CameraModel camera;
  const ImproveConfig cfg;  // kernel 5, d_act 2, max_passes 3
  const int half = cfg.kernel / 2;
  int unfilled = 0, far_modified = 0, defined_modified = 0;

  for (int fixture = 0; fixture < 100; ++fixture) {
    WorldConfig wc =
        world_config_for_class(DensityClass::difficult, 70000 + static_cast<std::uint64_t>(fixture));
    wc.extent_x = 20.0;
    wc.extent_y = 20.0;
    ForestWorld world = generate_world(wc);
    const Vec3 start(4.0, 10.0, 1.2);
    carve_clearing(world, start, 1.0);
    const DepthImage clean = render_depth(world, make_pose(start, 0.0), camera);

    NoiseConfig punch = no_noise();  // punch holes only, no value noise
    punch.random_dropout_p = 0.35;
    punch.seed = 70000 + static_cast<std::uint64_t>(fixture);
    const DepthImage holed = corrupt_depth(clean, punch, camera.max_range);
    const DepthImage improved = improve_depth(holed, cfg);

    for (int v = 0; v < holed.height; ++v) {
      for (int u = 0; u < holed.width; ++u) {
        const float before = holed.at(u, v);
        const float after = improved.at(u, v);
        if (DepthImage::defined(before)) {
          if (after != before) ++defined_modified;
          continue;
        }
        // window minimum over the punched input
        float window = std::numeric_limits<float>::infinity();
        for (int dv = -half; dv <= half; ++dv)
          for (int du = -half; du <= half; ++du) {
            const int uu = u + du, vv = v + dv;
            if (uu < 0 || uu >= holed.width || vv < 0 || vv >= holed.height) continue;
            const float value = holed.at(uu, vv);
            if (DepthImage::defined(value)) window = std::min(window, value);
          }
        if (window < cfg.d_act) {
          // a sub-2 m neighbor existed up front: must be filled
          if (!DepthImage::defined(after)) ++unfilled;
        }
        // far region: no sub-2 m defined pixel within the propagation reach
        const int reach = half * cfg.max_passes;
        bool near_obstacle = false;
        for (int dv = -reach; dv <= reach && !near_obstacle; ++dv)
          for (int du = -reach; du <= reach; ++du) {
            const int uu = u + du, vv = v + dv;
            if (uu < 0 || uu >= holed.width || vv < 0 || vv >= holed.height) continue;
            const float value = holed.at(uu, vv);
            if (DepthImage::defined(value) && value < cfg.d_act) {
              near_obstacle = true;
              break;
            }
          }
        if (!near_obstacle && DepthImage::defined(after)) ++far_modified;
      }
    }
  }
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%d fillable holes missed, %d far pixels touched, %d defined touched",
                unfilled, far_modified, defined_modified);
  detail = buf;
  return unfilled == 0 && far_modified == 0 && defined_modified == 0;
}

// ---------------------------------------------------------------- 7 ----

bool criterion_metrics(std::string& detail) {
  auto make_log = [](double duration, const std::function<Vec3(double)>& pos,
                     const std::function<Vec3(double)>& vel) {
    FlightLog log;
    const int n = static_cast<int>(std::llround(duration * 30.0));
    for (int i = 0; i <= n; ++i) {
      TickRecord r;
      r.t = i / 30.0;
      r.state.position = pos(r.t);
      r.state.velocity = vel(r.t);
      log.ticks.push_back(r);
    }
    log.outcome = Outcome::success;
    return log;
  };

  const FlightMetrics straight = compute_metrics(make_log(
      60.0, [](double t) { return Vec3(t, 0, 1.2); }, [](double) { return Vec3(1, 0, 0); }));
  const bool straight_ok = std::fabs(straight.displacement - 60.0) < 0.6 &&
                           std::fabs(straight.avg_vel_disp - 1.0) < 0.01 &&
                           std::fabs(straight.avg_odom_vel - 1.0) < 0.01 &&
                           straight.avg_accel < 0.01 && straight.smoothness_rms < 0.01;

  const double radius = 2.0, speed = 1.0, omega = speed / radius;
  const FlightMetrics circle = compute_metrics(make_log(
      4.0 * M_PI,
      [&](double t) { return Vec3(radius * std::cos(omega * t), radius * std::sin(omega * t), 1.2); },
      [&](double t) { return Vec3(-speed * std::sin(omega * t), speed * std::cos(omega * t), 0); }));
  const double centripetal = speed * speed / radius;
  const bool circle_ok = std::fabs(circle.avg_accel - centripetal) / centripetal < 0.01 &&
                         std::fabs(circle.avg_odom_vel - speed) < 0.01 * speed;

  CampaignConfig cc;
  cc.n_flights = 1;
  const CampaignResult result = summarize_campaign(
      cc, {make_log(10.0, [](double t) { return Vec3(t, 0, 1.2); },
                    [](double) { return Vec3(1, 0, 0); })});
  std::ostringstream csv;
  write_campaign_csv(result, csv);
  std::string header;
  std::istringstream(csv.str()) >> std::ws;
  header = csv.str().substr(0, csv.str().find('\n'));
  const bool schema_ok =
      header ==
      "Flight,Disp. [m],Avg. Vel. Disp. [m/s],Avg. Odom. Vel. [m/s],Avg. Accel. [m/s^2],"
      "Smoothness_RMS [m/s^2],Successful";

  std::ostringstream report;
  report << "straight " << (straight_ok ? "ok" : "BAD") << ", circle err "
         << std::fabs(circle.avg_accel - centripetal) / centripetal << ", schema "
         << (schema_ok ? "ok" : "BAD");
  detail = report.str();
  return straight_ok && circle_ok && schema_ok;
}

// ---------------------------------------------------------------- 8 ----

bool criterion_latency(std::string& detail) {
  PipelineConfig pipe;
  WorldConfig wc = world_config_for_class(DensityClass::difficult, 424243);
  ForestWorld world = generate_world(wc);
  carve_clearing(world, pipe.mission.start, 1.5);
  const Eigen::Isometry3d pose = make_pose(pipe.mission.start, 0.0);
  const DepthRenderer renderer(world, pipe.camera);
  const DepthImage rendered = renderer.render(pose);
  NoiseConfig noise = pipe.noise;
  noise.seed = 4242;
  const DepthImage corrupted = corrupt_depth(rendered, noise, pipe.camera.max_range);

  const auto library = build_library(pipe.primitives);
  const SectorGrid grid = SectorGrid::from_camera(pipe.camera);
  StateEstimate estimate;
  estimate.velocity = Vec3(1.0, 0.0, 0.0);
  GoalSpec goal{pipe.mission.goal, pipe.mission.goal.z()};

  std::vector<double> totals;
  volatile double sink = 0.0;
  for (int it = 0; it < 300; ++it) {
    PlannerState planner_state;
    const auto t0 = clock_type::now();
    const DepthImage refined = improve_depth(corrupted, pipe.improve);
    const LatentVector latent = encode(refined, pipe.camera.max_range);
    const RiskVector risks = ensemble_predict(refined, estimate, library, pipe.camera, pipe.predictor);
    BlockedMask mask = compute_blocked(refined, grid, pipe.supervisor);
    expand_margins(mask, grid, pipe.supervisor);
    const SafeActionSet safe = filter_actions(mask, library, grid, pipe.supervisor.lookahead);
    const Decision decision =
        select_action(risks, safe, goal, pose, library, planner_state, pipe.planner);
    totals.push_back(std::chrono::duration<double, std::milli>(clock_type::now() - t0).count());
    sink = sink + latent.values[0] + decision.risk;
  }
  std::sort(totals.begin(), totals.end());
  const double p95 = totals[static_cast<std::size_t>(0.95 * (totals.size() - 1))];
  char buf[96];
  std::snprintf(buf, sizeof(buf), "perception->plan p95 %.2f ms (budget 100 ms, stretch 10 ms)", p95);
  detail = buf;
  return p95 < 100.0;
}

// ---------------------------------------------------------------- 9 ----

bool criterion_determinism(std::string& detail) {
  PipelineConfig pipeline;  // default degradation
  pipeline.mission.odom_noise_sigma = 0.05;
  const ForestWorld world = make_campaign_world(DensityClass::difficult, 88001, pipeline.mission);
  const FlightLog a = run_flight(world, pipeline, 88001);
  const FlightLog b = run_flight(world, pipeline, 88001);
  const bool flight_ok = a.identical(b);
  std::ostringstream csv_a, csv_b;
  a.write_csv(csv_a);
  b.write_csv(csv_b);
  const bool csv_ok = csv_a.str() == csv_b.str();

  CampaignConfig cc;
  cc.n_flights = 4;
  cc.environment = DensityClass::medium;
  cc.base_seed = 88100;
  cc.jobs = hardware_jobs();
  const CampaignResult r1 = run_campaign(cc, pipeline);
  cc.jobs = 1;  // scheduling must not matter
  const CampaignResult r2 = run_campaign(cc, pipeline);
  std::ostringstream camp1, camp2;
  write_campaign_csv(r1, camp1);
  write_campaign_csv(r2, camp2);
  const bool campaign_ok = camp1.str() == camp2.str();

  std::ostringstream report;
  report << "flight " << (flight_ok ? "identical" : "DIVERGED") << ", csv "
         << (csv_ok ? "identical" : "DIVERGED") << ", campaign(jobs 2 vs 1) "
         << (campaign_ok ? "identical" : "DIVERGED");
  detail = report.str();
  return flight_ok && csv_ok && campaign_ok;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<bool(std::string&)> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "supervisor margin expansion matches the brute-force rule", criterion_supervisor_equivalence},
      {2, "noiseless flights never collide (100 per class)", criterion_end_to_end_safety},
      {3, "degraded-sensing success ordering across classes", criterion_success_ordering},
      {4, "unscented transform exactness", criterion_ut_exactness},
      {5, "geometric risk never cries wolf against the clearance oracle", criterion_predictor_oracle},
      {6, "depth improver fills near holes and leaves far regions alone", criterion_depth_improver},
      {7, "metrics match closed forms and the table schema", criterion_metrics},
      {8, "perception-to-plan latency under the 10 Hz budget", criterion_latency},
      {9, "flights and campaigns rerun bit-identically", criterion_determinism},
  };

  int failed = 0;
  for (const Criterion& c : criteria) {
    std::string detail;
    bool ok = false;
    try {
      ok = c.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] criterion %d: %s — %s\n", ok ? "PASS" : "FAIL", c.id, c.name, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failed;
  }
  if (failed > 0) std::printf("%d criterion(s) failed\n", failed);
  else std::printf("all 9 criteria passed\n");
  return failed == 0 ? 0 : 1;
}
