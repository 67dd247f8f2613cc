#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>

#include "fnav/config.hpp"
#include "fnav/depth_render.hpp"
#include "fnav/encoder.hpp"
#include "fnav/metrics.hpp"
#include "fnav/rng.hpp"
#include "fnav/sim.hpp"

namespace fs = std::filesystem;
using namespace fnav;

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  std::vector<std::string> overrides;
  std::uint64_t seed = 0;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "key=value config file");
  cmd->add_option("--out", args.out_dir, "output directory (default: runs/<cmd>-<timestamp>)");
  cmd->add_option("--set", args.overrides, "config override key=value (repeatable)")
      ->type_name("KEY=VALUE");
  cmd->add_option("--seed", args.seed, "base random seed");
}

fs::path prepare_out_dir(const CommonArgs& args, const std::string& subcommand) {
  fs::path dir;
  if (!args.out_dir.empty()) {
    dir = args.out_dir;
  } else {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    char stamp[32];
    std::strftime(stamp, sizeof(stamp), "%Y%m%d-%H%M%S", std::localtime(&tt));
    dir = fs::path("runs") / (subcommand + "-" + stamp);
  }
  fs::create_directories(dir);
  return dir;
}

Settings build_settings(const CommonArgs& args) {
  Settings settings;
  if (!args.config_path.empty()) settings.load_file(args.config_path);
  for (const std::string& text : args.overrides) {
    const auto [key, value] = split_assignment(text);
    settings.apply(key, value);
  }
  return settings;
}

void write_manifest(const fs::path& dir, const std::string& subcommand, const CommonArgs& args,
                    const Settings& settings) {
  std::ofstream out(dir / "manifest.txt");
  out << "# rerun with: fnav " << subcommand << " --config manifest.txt --seed " << args.seed
      << " --out <dir>\n";
  out << "# subcommand = " << subcommand << "\n";
  out << "# seed = " << args.seed << "\n";
  out << settings.echo();
}

void report_outcome(const FlightLog& log) {
  const FlightMetrics m = compute_metrics(log);
  std::printf("outcome=%s duration=%.2fs displacement=%.2fm avg_vel=%.3fm/s\n",
              to_string(log.outcome).c_str(), log.duration, m.displacement, m.avg_odom_vel);
}

// Dumps masks / depth images / latents per planning decision.
class DecisionDumper : public FlightObserver {
 public:
  DecisionDumper(fs::path dir, bool masks, bool depth_raw, bool depth_refined, bool latent,
                 int every, double max_range)
      : dir_(std::move(dir)), masks_(masks), depth_raw_(depth_raw), depth_refined_(depth_refined),
        latent_(latent), every_(std::max(1, every)), max_range_(max_range) {}

  void on_decision(int plan_index, const DepthImage& raw, const DepthImage& refined,
                   const BlockedMask& mask, const Decision& decision) override {
    if (plan_index % every_ != 0) return;
    char tag[32];
    std::snprintf(tag, sizeof(tag), "%05d", plan_index);
    if (masks_) {
      std::ofstream out(dir_ / (std::string("mask_") + tag + ".txt"));
      int sel_i = -1, sel_j = -1;
      if (decision.selected_index >= 0) {
        sel_i = decision.selected_index % PrimitiveConfig::kYawBins;
        sel_j = decision.selected_index / PrimitiveConfig::kYawBins;
        // display coordinates: the selected primitive's (yaw, z) bins
      }
      out << "# decision " << plan_index << " selected=" << decision.selected_index
          << " risk=" << decision.risk << " safe=" << decision.safe_count
          << (decision.dead_end ? " DEAD_END" : "") << "\n";
      out << format_mask(mask, sel_i, sel_j);
    }
    if (depth_raw_) save_depth_pgm(raw, dir_ / (std::string("depth_raw_") + tag + ".pgm"));
    if (depth_refined_)
      save_depth_pgm(refined, dir_ / (std::string("depth_refined_") + tag + ".pgm"));
    if (latent_) {
      const LatentVector lv = encode(refined, max_range_);
      std::ofstream out(dir_ / (std::string("latent_") + tag + ".csv"));
      for (int i = 0; i < LatentVector::kSize; ++i)
        out << (i ? "," : "") << lv.values[static_cast<std::size_t>(i)];
      out << "\n";
    }
  }

 private:
  fs::path dir_;
  bool masks_, depth_raw_, depth_refined_, latent_;
  int every_;
  double max_range_;
};

int cmd_generate_world(const CommonArgs& args) {
  const Settings settings = build_settings(args);
  const fs::path dir = prepare_out_dir(args, "generate-world");
  write_manifest(dir, "generate-world", args, settings);

  WorldConfig cfg = settings.world;
  cfg.seed = args.seed;
  const ForestWorld world = generate_world(cfg);
  save_world(world, (dir / "world.txt").string());

  const double area_ha = cfg.extent_x * cfg.extent_y * 1e-4;
  const double realized = static_cast<double>(world.trunks.size()) / area_ha;
  std::ofstream report(dir / "density.txt");
  report << "trunks " << world.trunks.size() << "\nbranches " << world.branches.size()
         << "\nrealized_trees_per_ha " << realized << "\nconfigured_trees_per_ha "
         << cfg.trunk_density << "\n";
  std::printf("world: %zu trunks, %zu branches, %.1f trees/ha realized -> %s\n",
              world.trunks.size(), world.branches.size(), realized,
              (dir / "world.txt").c_str());
  return 0;
}

int cmd_fly(const CommonArgs& args, const std::string& world_path, bool dump_masks,
            const std::string& dump_depth, bool dump_latent, int dump_every) {
  const Settings settings = build_settings(args);
  const fs::path dir = prepare_out_dir(args, "fly");
  write_manifest(dir, "fly", args, settings);

  ForestWorld world;
  if (!world_path.empty()) {
    if (!fs::exists(world_path)) {
      std::fprintf(stderr, "error: world file not found: %s\n", world_path.c_str());
      return 1;
    }
    world = load_world(world_path);
  } else {
    WorldConfig wc = settings.world;
    wc.seed = args.seed;
    world = generate_world(wc);
    carve_clearing(world, settings.pipeline.mission.start, 1.5);
    carve_clearing(world, settings.pipeline.mission.goal, 1.5);
  }
  save_world(world, (dir / "world.txt").string());

  std::optional<DecisionDumper> dumper;
  if (dump_masks || !dump_depth.empty() || dump_latent) {
    dumper.emplace(dir, dump_masks, dump_depth == "raw" || dump_depth == "both",
                   dump_depth == "refined" || dump_depth == "both", dump_latent, dump_every,
                   settings.pipeline.camera.max_range);
  }

  const FlightLog log =
      run_flight(world, settings.pipeline, args.seed, dumper ? &*dumper : nullptr);
  {
    std::ofstream csv(dir / "flight.csv");
    log.write_csv(csv);
    std::ofstream path(dir / "path.xy");
    log.write_path(path);
    std::ofstream meta(dir / "flight_meta.txt");
    meta << "outcome = " << to_string(log.outcome) << "\nduration = " << log.duration
         << "\nseed = " << args.seed << "\nworld = world.txt\n";
  }
  report_outcome(log);

  switch (log.outcome) {
    case Outcome::success: return 0;
    case Outcome::collision: return 2;
    case Outcome::timeout: return 3;
  }
  return 3;
}

int cmd_campaign(const CommonArgs& args) {
  Settings settings = build_settings(args);
  const fs::path dir = prepare_out_dir(args, "campaign");
  write_manifest(dir, "campaign", args, settings);

  CampaignConfig campaign = settings.campaign;
  campaign.base_seed = args.seed;

  PipelineConfig pipeline = settings.pipeline;
  pipeline.primitives = PrimitiveConfig::defaults(campaign.target_velocity);

  std::vector<FlightLog> logs(static_cast<std::size_t>(campaign.n_flights));
  for (int i = 0; i < campaign.n_flights; ++i) {
    const std::uint64_t seed = campaign.base_seed + static_cast<std::uint64_t>(i);
    const ForestWorld world = make_campaign_world(campaign.environment, seed, pipeline.mission);
    logs[static_cast<std::size_t>(i)] = run_flight(world, pipeline, seed);
    char name[48];
    std::snprintf(name, sizeof(name), "flight_%03d.xy", i + 1);
    std::ofstream path(dir / name);
    logs[static_cast<std::size_t>(i)].write_path(path);
    std::printf("flight %d/%d: %s\n", i + 1, campaign.n_flights,
                to_string(logs[static_cast<std::size_t>(i)].outcome).c_str());
  }

  const CampaignResult result = summarize_campaign(campaign, logs);
  {
    std::ofstream csv(dir / "campaign.csv");
    write_campaign_csv(result, csv);
  }
  std::ostringstream summary;
  write_campaign_csv(result, summary);
  const std::string text = summary.str();
  std::fputs(text.c_str() + text.rfind("Mean"), stdout);
  std::printf("success rate: %s\n", result.success_fraction().c_str());
  return 0;
}

double percentile(std::vector<double> samples, double p) {
  std::sort(samples.begin(), samples.end());
  const double rank = p * static_cast<double>(samples.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(rank);
  const std::size_t hi = std::min(samples.size() - 1, lo + 1);
  const double frac = rank - static_cast<double>(lo);
  return samples[lo] * (1.0 - frac) + samples[hi] * frac;
}

int cmd_bench(const CommonArgs& args, int iterations) {
  Settings settings = build_settings(args);
  const fs::path dir = prepare_out_dir(args, "bench");
  write_manifest(dir, "bench", args, settings);

  // Fixed representative frame: dense-class world seen from the start pose.
  WorldConfig wc = world_config_for_class(DensityClass::difficult, args.seed);
  ForestWorld world = generate_world(wc);
  const PipelineConfig& pipe = settings.pipeline;
  carve_clearing(world, pipe.mission.start, 1.5);
  const Eigen::Isometry3d pose = make_pose(pipe.mission.start, 0.0);

  const DepthRenderer renderer(world, pipe.camera);
  const DepthImage rendered = renderer.render(pose);
  NoiseConfig noise = pipe.noise;
  noise.seed = derive_seed(args.seed, 0xbe9c4ULL);
  const DepthImage corrupted = corrupt_depth(rendered, noise, pipe.camera.max_range);

  const std::vector<MotionPrimitive> library = build_library(pipe.primitives);
  const SectorGrid grid = SectorGrid::from_camera(pipe.camera);
  StateEstimate estimate;
  estimate.velocity = Vec3(pipe.primitives.vx_nominal, 0.0, 0.0);
  estimate.covariance.topLeftCorner<3, 3>() = 0.01 * Eigen::Matrix3d::Identity();
  GoalSpec goal{pipe.mission.goal, pipe.mission.goal.z()};

  using clock = std::chrono::steady_clock;
  const char* stage_names[] = {"improve", "encode", "predict_ensemble", "supervisor", "planner"};
  std::vector<std::vector<double>> stage_ms(5);
  std::vector<double> total_ms, ut_ms;
  volatile double sink = 0.0;  // keep results alive

  for (int it = 0; it < iterations; ++it) {
    PlannerState planner_state;
    const auto t0 = clock::now();
    const DepthImage refined = improve_depth(corrupted, pipe.improve);
    const auto t1 = clock::now();
    const LatentVector latent = encode(refined, pipe.camera.max_range);
    const auto t2 = clock::now();
    const RiskVector risks = ensemble_predict(refined, estimate, library, pipe.camera, pipe.predictor);
    const auto t3 = clock::now();
    BlockedMask mask = compute_blocked(refined, grid, pipe.supervisor);
    expand_margins(mask, grid, pipe.supervisor);
    const SafeActionSet safe = filter_actions(mask, library, grid, pipe.supervisor.lookahead);
    const auto t4 = clock::now();
    const Decision decision = select_action(risks, safe, goal, pose, library, planner_state, pipe.planner);
    const auto t5 = clock::now();

    auto ms = [](auto a, auto b) { return std::chrono::duration<double, std::milli>(b - a).count(); };
    stage_ms[0].push_back(ms(t0, t1));
    stage_ms[1].push_back(ms(t1, t2));
    stage_ms[2].push_back(ms(t2, t3));
    stage_ms[3].push_back(ms(t3, t4));
    stage_ms[4].push_back(ms(t4, t5));
    total_ms.push_back(ms(t0, t5));

    const auto tu0 = clock::now();
    const RiskVector ut_risks = ut_predict(refined, estimate, library, pipe.camera, pipe.predictor);
    ut_ms.push_back(ms(tu0, clock::now()));
    sink = sink + latent.values[0] + decision.risk + ut_risks[0];
  }

  std::ostringstream report;
  report << "iterations " << iterations << "\n";
  char line[160];
  for (int s = 0; s < 5; ++s) {
    std::snprintf(line, sizeof(line), "%-18s p50 %8.3f ms   p95 %8.3f ms   p99 %8.3f ms\n",
                  stage_names[s], percentile(stage_ms[static_cast<std::size_t>(s)], 0.50),
                  percentile(stage_ms[static_cast<std::size_t>(s)], 0.95),
                  percentile(stage_ms[static_cast<std::size_t>(s)], 0.99));
    report << line;
  }
  std::snprintf(line, sizeof(line), "%-18s p50 %8.3f ms   p95 %8.3f ms   p99 %8.3f ms\n", "total",
                percentile(total_ms, 0.50), percentile(total_ms, 0.95), percentile(total_ms, 0.99));
  report << line;
  std::snprintf(line, sizeof(line), "%-18s p50 %8.3f ms   p95 %8.3f ms   p99 %8.3f ms (not in total)\n",
                "predict_ut", percentile(ut_ms, 0.50), percentile(ut_ms, 0.95),
                percentile(ut_ms, 0.99));
  report << line;

  double stage_sum_p50 = 0.0;
  for (int s = 0; s < 5; ++s) stage_sum_p50 += percentile(stage_ms[static_cast<std::size_t>(s)], 0.50);
  const double total_p50 = percentile(total_ms, 0.50);
  std::snprintf(line, sizeof(line), "accounting: stage p50 sum %.3f ms vs total p50 %.3f ms (%+.1f%%)\n",
                stage_sum_p50, total_p50, 100.0 * (stage_sum_p50 - total_p50) / total_p50);
  report << line;

  const double p95_total = percentile(total_ms, 0.95);
  std::snprintf(line, sizeof(line), "budget: total p95 %.3f ms vs 100 ms (10 Hz) -> %s\n", p95_total,
                p95_total < 100.0 ? "PASS" : "FAIL");
  report << line;

  std::ofstream out(dir / "bench.txt");
  out << report.str();
  std::fputs(report.str().c_str(), stdout);
  return p95_total < 100.0 ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Map-free forest navigation: simulator, pipeline and benchmarks"};
  app.require_subcommand(1);

  CommonArgs gen_args, fly_args, campaign_args, bench_args;

  CLI::App* gen = app.add_subcommand("generate-world", "generate a procedural forest");
  add_common(gen, gen_args);
  std::string gen_class;
  double gen_density = -1.0;
  gen->add_option("--class", gen_class, "density class: medium|difficult|very_difficult|none");
  gen->add_option("--density", gen_density, "override trees/ha");

  CLI::App* fly = app.add_subcommand("fly", "run one closed-loop flight");
  add_common(fly, fly_args);
  std::string world_path, fly_class, dump_depth;
  bool dump_masks = false, dump_latent = false;
  int dump_every = 1;
  fly->add_option("--world", world_path, "world file (generated when omitted)");
  fly->add_option("--class", fly_class, "density class for the generated world");
  fly->add_flag("--dump-masks", dump_masks, "write supervisor masks per decision");
  fly->add_option("--dump-depth", dump_depth, "write depth PGMs: raw|refined|both")
      ->check(CLI::IsMember({"raw", "refined", "both"}));
  fly->add_flag("--dump-latent", dump_latent, "write 128-value latent CSVs");
  fly->add_option("--dump-every", dump_every, "dump every Nth decision (default 1)");

  CLI::App* campaign = app.add_subcommand("campaign", "repeated-flight evaluation protocol");
  add_common(campaign, campaign_args);
  std::string campaign_class;
  int campaign_flights = -1;
  double campaign_velocity = -1.0;
  int campaign_jobs = -1;
  campaign->add_option("--class", campaign_class, "environment density class");
  campaign->add_option("--flights", campaign_flights, "number of flights (default 15)");
  campaign->add_option("--velocity", campaign_velocity, "target forward velocity m/s");
  campaign->add_option("--jobs", campaign_jobs, "parallel flights");

  CLI::App* bench = app.add_subcommand("bench", "pipeline latency benchmark");
  add_common(bench, bench_args);
  int iterations = 1000;
  bench->add_option("--iterations", iterations, "timing iterations (default 1000)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      if (!gen_class.empty()) gen_args.overrides.insert(gen_args.overrides.begin(), "world.class=" + gen_class);
      if (gen_density >= 0.0) gen_args.overrides.push_back("world.density=" + std::to_string(gen_density));
      return cmd_generate_world(gen_args);
    }
    if (fly->parsed()) {
      if (!fly_class.empty()) fly_args.overrides.insert(fly_args.overrides.begin(), "world.class=" + fly_class);
      return cmd_fly(fly_args, world_path, dump_masks, dump_depth, dump_latent, dump_every);
    }
    if (campaign->parsed()) {
      if (!campaign_class.empty())
        campaign_args.overrides.insert(campaign_args.overrides.begin(), "campaign.class=" + campaign_class);
      if (campaign_flights > 0)
        campaign_args.overrides.push_back("campaign.n_flights=" + std::to_string(campaign_flights));
      if (campaign_velocity > 0.0)
        campaign_args.overrides.push_back("campaign.velocity=" + std::to_string(campaign_velocity));
      if (campaign_jobs > 0)
        campaign_args.overrides.push_back("campaign.jobs=" + std::to_string(campaign_jobs));
      return cmd_campaign(campaign_args);
    }
    if (bench->parsed()) return cmd_bench(bench_args, iterations);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
