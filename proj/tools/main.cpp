// roix: exploration simulator and analysis driver.
//
// Subcommands: sweep, verify, explore, noisy-explore, geometry-check.
// Exit code 0 iff every invariant check requested by the subcommand passes.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "roix/analysis.hpp"
#include "roix/dfs_explorer.hpp"
#include "roix/geometry.hpp"
#include "roix/grid_world.hpp"
#include "roix/harness.hpp"
#include "roix/rng.hpp"
#include "roix/sensing.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

struct WorldArgs {
  std::string map_path;
  std::vector<uint64_t> random_spec;  // C SEED
};

roix::GridRoi load_world(const WorldArgs& args) {
  if (!args.map_path.empty()) return roix::load_scenario(read_file(args.map_path));
  if (args.random_spec.size() == 2)
    return roix::generate_random_roi(static_cast<int>(args.random_spec[0]),
                                     args.random_spec[1]);
  throw CLI::ValidationError("need either --map FILE or --random C SEED");
}

// Scenario files carry their own ROI speed (including 0 for a static map);
// generated worlds follow the sweep convention of a unit ROI speed. The
// robot speed is the ratio times the ROI speed, or the plain ratio when the
// world is static.
void resolve_speeds(const roix::GridRoi& world, bool generated, double speed_ratio,
                    std::optional<double> roi_speed_flag, double& robot_speed,
                    double& roi_speed) {
  roi_speed = roi_speed_flag.value_or(generated ? 1.0 : world.roi_speed());
  robot_speed = roi_speed > 0 ? speed_ratio * roi_speed : speed_ratio;
}

int cmd_explore(const WorldArgs& world_args, int robots, double speed_ratio,
                std::optional<double> roi_speed_flag, const std::string& out_path,
                const std::string& save_map_path) {
  const roix::GridRoi world = load_world(world_args);
  if (!save_map_path.empty()) write_file(save_map_path, roix::save_scenario(world));
  double robot_speed, roi_speed;
  resolve_speeds(world, world_args.map_path.empty(), speed_ratio, roi_speed_flag,
                 robot_speed, roi_speed);

  const roix::ExplorationRun run =
      roix::explore(world, {robots, robot_speed, roi_speed});
  const roix::BoundsReport bounds = roix::make_bounds_report(run, world);
  const roix::RewardAudit audit = roix::audit_rewards(run);

  const bool complete = run.cell_count == world.cell_count() && run.tree.all_explored();
  const bool upper_ok = run.total_time <= bounds.upper * (1 + 1e-9);
  const bool lower_ok = bounds.lower_grid <= run.total_time + 1e-9;

  std::printf("cells            %d\n", run.cell_count);
  std::printf("robots           %d\n", robots);
  std::printf("speeds           robot %.6g, roi %.6g (%s)\n", robot_speed, roi_speed,
              roix::direction_name(world.translation_dir()));
  std::printf("completion time  %.6f\n", run.total_time);
  std::printf("last leaf time   %.6f\n", run.last_leaf_time);
  std::printf("tree             depth %d, length %d, %d vertices\n", run.max_depth,
              run.total_edge_length, run.tree.vertex_count());
  std::printf("upper bound      %.6f  [%s]\n", bounds.upper,
              upper_ok ? "ok" : "VIOLATED");
  std::printf("lower bound      %.6f  [%s]\n", bounds.lower_grid,
              lower_ok ? "ok" : "VIOLATED");
  std::printf("lawnmower        %.6f\n", bounds.lawnmower);
  std::printf("reward audit     lhs %.6f <= total %.6f <= rhs %.6f  [%s]\n", audit.lhs,
              audit.total, audit.rhs, audit.ok ? "ok" : "outside");
  std::printf("coverage         %s\n", complete ? "complete" : "INCOMPLETE");

  if (!out_path.empty()) {
    nlohmann::json j;
    j["alg_time"] = run.total_time;
    j["t_last"] = run.last_leaf_time;
    j["C"] = run.cell_count;
    j["R"] = robots;
    j["S_r"] = robot_speed;
    j["S_p"] = roi_speed;
    j["d_max"] = run.max_depth;
    j["L"] = run.total_edge_length;
    j["upper_bound"] = bounds.upper;
    j["lower_bound_grid"] = bounds.lower_grid;
    j["lawnmower_bound"] = bounds.lawnmower;
    j["reward_lhs"] = audit.lhs;
    j["reward_total"] = audit.total;
    j["reward_rhs"] = audit.rhs;
    j["tree"] = nlohmann::json::parse(run.tree.serialize());
    write_file(out_path, j.dump(2));
  }
  return complete && upper_ok && lower_ok ? 0 : 1;
}

int cmd_sweep(roix::ExperimentConfig config, const std::string& kind,
              const std::string& out_path, const std::string& format) {
  config.sweep = roix::sweep_kind_from_name(kind);
  config.format = format == "json" ? roix::OutputFormat::Json : roix::OutputFormat::Csv;

  const roix::SweepTable table = roix::run_sweep(config);
  const std::string text =
      config.format == roix::OutputFormat::Json ? table.to_json() : table.to_csv();
  if (out_path.empty())
    std::fputs(text.c_str(), stdout);
  else
    write_file(out_path, text);

  std::fprintf(stderr, "%-12s %12s %12s %12s %12s\n", "point", "mean", "min", "max",
               "upper(mean)");
  for (const roix::PointAggregate& a : table.aggregates)
    std::fprintf(stderr, "%-12g %12.4f %12.4f %12.4f %12.4f\n", a.sweep_param,
                 a.mean_alg_time, a.min_alg_time, a.max_alg_time, a.mean_upper);
  return 0;
}

int cmd_verify(const std::string& tier, uint64_t seed) {
  const roix::VerificationReport report = roix::run_verification(
      tier == "full" ? roix::VerificationTier::Full : roix::VerificationTier::Quick,
      seed);
  std::fputs(report.to_text().c_str(), stdout);
  return report.all_pass() ? 0 : 1;
}

int cmd_noisy(const WorldArgs& world_args, int robots, double speed_ratio,
              std::optional<double> roi_speed_flag, double p_fp, double p_fn,
              uint64_t sensor_seed, const std::string& resume_path,
              const std::string& checkpoint_path, int checkpoint_after,
              const std::string& out_path) {
  const roix::GridRoi world = load_world(world_args);
  double robot_speed, roi_speed;
  resolve_speeds(world, world_args.map_path.empty(), speed_ratio, roi_speed_flag,
                 robot_speed, roi_speed);
  const roix::SensorModel model{p_fp, p_fn, 5, 3, sensor_seed};

  auto session =
      resume_path.empty()
          ? roix::NoisySession(world, {robots, robot_speed, roi_speed}, model)
          : roix::NoisySession::load_resume_state(read_file(resume_path), world);

  if (!checkpoint_path.empty()) {
    for (int i = 0; i < checkpoint_after && !session.done(); ++i) session.advance();
    write_file(checkpoint_path, session.save_resume_state());
    std::printf("checkpoint written to %s (%s)\n", checkpoint_path.c_str(),
                session.done() ? "run already complete" : "run in progress");
    return 0;
  }

  while (!session.done()) session.advance();
  const roix::NoisyExplorationResult out = std::move(session).finish();

  std::printf("believed cells   %d (true %d)\n", out.belief.believed_roi_count(),
              world.cell_count());
  std::printf("iou              %.4f\n", out.iou);
  std::printf("confusion        tp %ld  fp %ld  tn %ld  fn %ld\n", out.confusion.tp,
              out.confusion.fp, out.confusion.tn, out.confusion.fn);
  std::printf("missed cells     %d%s\n", out.true_cells_missed,
              out.disconnected ? " (belief disconnected part of the ROI)" : "");
  std::printf("completion time  %.6f\n", out.run.total_time);

  if (!out_path.empty()) {
    nlohmann::json j;
    j["iou"] = out.iou;
    j["confusion"] = {{"tp", out.confusion.tp},
                      {"fp", out.confusion.fp},
                      {"tn", out.confusion.tn},
                      {"fn", out.confusion.fn}};
    j["alg_time"] = out.run.total_time;
    j["missed"] = out.true_cells_missed;
    j["belief"] = nlohmann::json::parse(out.belief.serialize());
    j["tree"] = nlohmann::json::parse(out.run.tree.serialize());
    write_file(out_path, j.dump(2));
  }
  return 0;
}

int cmd_geometry(const std::string& poly_path, int shapes, uint64_t seed) {
  bool all_ok = true;
  auto check_one = [&](const roix::FatPolygon& poly, const std::string& label) {
    const bool fat = roix::is_fat(poly);
    const roix::ApproximationReport r = roix::verify_approximation_bounds(poly);
    const bool ok = r.outer_bound_ok && r.best_bound_ok;
    all_ok = all_ok && ok;
    std::printf("%-10s fat=%d  C_out=%-4d C_in=%-4d C_best=%-4d  outer<=3*inner+6 %s  "
                "inner<=6*best %s\n",
                label.c_str(), fat ? 1 : 0, r.c_out, r.c_in, r.c_best,
                r.outer_bound_ok ? "ok" : "FAIL", r.best_bound_ok ? "ok" : "FAIL");
  };

  if (!poly_path.empty()) {
    check_one(roix::load_polygon(read_file(poly_path)), poly_path);
  } else {
    for (int i = 0; i < shapes; ++i)
      check_one(roix::random_fat_shape(roix::mix_seed(seed, 0x9e0ULL, i)),
                "shape " + std::to_string(i));
  }
  return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"online exploration of an unknown region of interest: simulator, "
               "bounds, and experiment harness"};
  app.require_subcommand(1);

  // explore
  WorldArgs ex_world;
  int ex_robots = 1;
  double ex_ratio = 2.5;
  std::optional<double> ex_roi_speed;
  std::string ex_out, ex_save_map;
  auto* explore = app.add_subcommand("explore", "run one exploration and check bounds");
  explore->add_option("--map", ex_world.map_path, "scenario JSON file");
  explore->add_option("--random", ex_world.random_spec, "generate: C SEED")
      ->expected(2);
  explore->add_option("--robots", ex_robots, "team size");
  explore->add_option("--speed-ratio", ex_ratio, "robot/ROI speed ratio");
  explore->add_option("--roi-speed", ex_roi_speed, "override ROI speed");
  explore->add_option("--out", ex_out, "write run record (JSON)");
  explore->add_option("--save-map", ex_save_map, "write the world as a scenario file");

  // sweep
  roix::ExperimentConfig sw_config;
  std::string sw_kind = "single", sw_out, sw_format = "csv";
  auto* sweep = app.add_subcommand("sweep", "run an experiment sweep");
  sweep->add_option("--kind", sw_kind, "cells|robots|speed-ratio|single")
      ->check(CLI::IsMember({"cells", "robots", "speed-ratio", "single"}));
  sweep->add_option("--trials", sw_config.trials, "trials per sweep point");
  sweep->add_option("--seed", sw_config.master_seed, "master seed");
  sweep->add_option("--robots", sw_config.robots, "fixed team size");
  sweep->add_option("--cells", sw_config.cells, "fixed ROI size");
  sweep->add_option("--speed-ratio", sw_config.speed_ratio, "fixed speed ratio");
  sweep->add_option("--grid", sw_config.grid, "explicit sweep values");
  sweep->add_option("--out", sw_out, "output file (default stdout)");
  sweep->add_option("--format", sw_format, "csv|json")
      ->check(CLI::IsMember({"csv", "json"}));

  // verify
  std::string vf_tier = "quick";
  uint64_t vf_seed = 1;
  auto* verify = app.add_subcommand("verify", "run the self-check suites");
  verify->add_option("--tier", vf_tier, "quick|full")
      ->check(CLI::IsMember({"quick", "full"}));
  verify->add_option("--seed", vf_seed, "master seed");

  // noisy-explore
  WorldArgs no_world;
  int no_robots = 1;
  double no_ratio = 2.5, no_pfp = 27.0 / 483.0, no_pfn = 53.0 / 483.0;
  std::optional<double> no_roi_speed;
  uint64_t no_seed = 1;
  std::string no_resume, no_checkpoint, no_out;
  int no_checkpoint_after = 0;
  auto* noisy =
      app.add_subcommand("noisy-explore", "explore with the imperfect classifier");
  noisy->add_option("--map", no_world.map_path, "scenario JSON file");
  noisy->add_option("--random", no_world.random_spec, "generate: C SEED")->expected(2);
  noisy->add_option("--robots", no_robots, "team size");
  noisy->add_option("--speed-ratio", no_ratio, "robot/ROI speed ratio");
  noisy->add_option("--roi-speed", no_roi_speed, "override ROI speed");
  noisy->add_option("--p-fp", no_pfp, "per-image false-positive probability");
  noisy->add_option("--p-fn", no_pfn, "per-image false-negative probability");
  noisy->add_option("--seed", no_seed, "sensor RNG seed");
  noisy->add_option("--resume", no_resume, "resume-state file to continue from");
  noisy->add_option("--checkpoint", no_checkpoint,
                    "write a resume-state file and stop");
  noisy->add_option("--checkpoint-after", no_checkpoint_after,
                    "event batches to run before the checkpoint");
  noisy->add_option("--out", no_out, "write result record (JSON)");

  // geometry-check
  std::string gc_poly;
  int gc_shapes = 20;
  uint64_t gc_seed = 1;
  auto* geom =
      app.add_subcommand("geometry-check", "fatness and grid-approximation checks");
  geom->add_option("--poly", gc_poly, "polygon JSON file");
  geom->add_option("--shapes", gc_shapes, "number of random fat shapes");
  geom->add_option("--seed", gc_seed, "shape generator seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (explore->parsed())
      return cmd_explore(ex_world, ex_robots, ex_ratio, ex_roi_speed, ex_out,
                         ex_save_map);
    if (sweep->parsed()) return cmd_sweep(sw_config, sw_kind, sw_out, sw_format);
    if (verify->parsed()) return cmd_verify(vf_tier, vf_seed);
    if (noisy->parsed())
      return cmd_noisy(no_world, no_robots, no_ratio, no_roi_speed, no_pfp, no_pfn,
                       no_seed, no_resume, no_checkpoint, no_checkpoint_after, no_out);
    if (geom->parsed()) return cmd_geometry(gc_poly, gc_shapes, gc_seed);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
