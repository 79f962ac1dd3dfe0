#include "roix/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "roix/dfs_explorer.hpp"
#include "roix/geometry.hpp"
#include "roix/rng.hpp"
#include "roix/sensing.hpp"

namespace roix {

namespace {

constexpr double kSlack = 1e-9;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

const char* sweep_kind_name(SweepKind k) {
  switch (k) {
    case SweepKind::Cells: return "cells";
    case SweepKind::Robots: return "robots";
    case SweepKind::SpeedRatio: return "speed-ratio";
    case SweepKind::Single: return "single";
  }
  return "?";
}

SweepKind sweep_kind_from_name(const std::string& name) {
  if (name == "cells") return SweepKind::Cells;
  if (name == "robots") return SweepKind::Robots;
  if (name == "speed-ratio") return SweepKind::SpeedRatio;
  if (name == "single") return SweepKind::Single;
  throw std::invalid_argument("unknown sweep kind: " + name);
}

std::vector<double> default_sweep_grid(SweepKind kind) {
  switch (kind) {
    case SweepKind::Cells: return {40, 80, 120, 160, 200};
    case SweepKind::Robots: return {1, 2, 4, 8, 16, 32};
    case SweepKind::SpeedRatio: return {1.5, 2.0, 2.5, 3.0, 4.0};
    case SweepKind::Single: return {0};
  }
  return {};
}

SweepTable run_sweep(const ExperimentConfig& config) {
  if (config.trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (!(config.speed_ratio > 1.0))
    throw std::invalid_argument("speed ratio must exceed 1");
  if (config.cells < 1 || config.robots < 1)
    throw std::invalid_argument("cells and robots must be >= 1");

  SweepTable table;
  table.config = config;
  const std::vector<double> grid =
      config.grid.empty() ? default_sweep_grid(config.sweep) : config.grid;

  for (std::size_t point = 0; point < grid.size(); ++point) {
    int cells = config.cells;
    int robots = config.robots;
    double ratio = config.speed_ratio;
    switch (config.sweep) {
      case SweepKind::Cells: cells = static_cast<int>(grid[point]); break;
      case SweepKind::Robots: robots = static_cast<int>(grid[point]); break;
      case SweepKind::SpeedRatio: ratio = grid[point]; break;
      case SweepKind::Single: break;
    }
    // Only the speed ratio matters for the bounds (everything scales with a
    // common speed factor), so the ROI speed is normalized to 1.
    const double roi_speed = 1.0;
    const double robot_speed = ratio;

    PointAggregate agg;
    agg.sweep_param = grid[point];
    agg.min_alg_time = std::numeric_limits<double>::infinity();

    for (int trial = 0; trial < config.trials; ++trial) {
      const uint64_t seed = mix_seed(config.master_seed, point, trial);
      const GridRoi world = generate_random_roi(cells, seed);
      const ExplorationRun run =
          explore(world, {robots, robot_speed, roi_speed});
      const BoundsReport bounds = make_bounds_report(run, world);
      const RewardAudit audit = audit_rewards(run);

      // The proven bounds abort on violation with the offending seed. The
      // lawnmower baseline and the reward-token inequality are recorded per
      // row instead: both are analysis devices that can cross the realized
      // time on adversarial instances (stringy maps at R=1, rare token
      // shortfalls at small R), not guarantees about each run.
      auto fail = [&](const std::string& what) {
        throw std::runtime_error("sweep invariant violated (" + what +
                                 ") at seed " + std::to_string(seed));
      };
      if (run.total_time > bounds.upper * (1.0 + kSlack) + kSlack)
        fail("upper bound");
      if (bounds.lower_grid > run.total_time + kSlack) fail("grid lower bound");

      TrialRow row;
      row.sweep_param = grid[point];
      row.trial = trial;
      row.seed = seed;
      row.cells = run.cell_count;
      row.robots = robots;
      row.robot_speed = robot_speed;
      row.roi_speed = roi_speed;
      row.alg_time = run.total_time;
      row.t_last = run.last_leaf_time;
      row.max_depth = run.max_depth;
      row.total_edge_length = run.total_edge_length;
      row.upper_bound = bounds.upper;
      row.lower_bound_grid = bounds.lower_grid;
      row.lawnmower_bound = bounds.lawnmower;
      row.reward_lhs = audit.lhs;
      row.reward_rhs = audit.rhs;
      table.rows.push_back(row);

      agg.mean_alg_time += run.total_time;
      agg.min_alg_time = std::min(agg.min_alg_time, run.total_time);
      agg.max_alg_time = std::max(agg.max_alg_time, run.total_time);
      agg.mean_upper += bounds.upper;
      agg.mean_lower += bounds.lower_grid;
      agg.mean_lawnmower += bounds.lawnmower;
    }
    agg.mean_alg_time /= config.trials;
    agg.mean_upper /= config.trials;
    agg.mean_lower /= config.trials;
    agg.mean_lawnmower /= config.trials;
    table.aggregates.push_back(agg);
  }
  return table;
}

std::string SweepTable::to_csv() const {
  std::ostringstream out;
  out << "sweep_param,trial,seed,C,R,S_r,S_p,alg_time,t_last,d_max,L,"
         "upper_bound,lower_bound_grid,lawnmower_bound,reward_lhs,reward_rhs\n";
  for (const TrialRow& r : rows) {
    out << fmt(r.sweep_param) << ',' << r.trial << ',' << r.seed << ','
        << r.cells << ',' << r.robots << ',' << fmt(r.robot_speed) << ','
        << fmt(r.roi_speed) << ',' << fmt(r.alg_time) << ',' << fmt(r.t_last)
        << ',' << r.max_depth << ',' << r.total_edge_length << ','
        << fmt(r.upper_bound) << ',' << fmt(r.lower_bound_grid) << ','
        << fmt(r.lawnmower_bound) << ',' << fmt(r.reward_lhs) << ','
        << fmt(r.reward_rhs) << '\n';
  }
  return out.str();
}

std::string SweepTable::to_json() const {
  nlohmann::json j;
  j["config"] = {{"sweep", sweep_kind_name(config.sweep)},
                 {"cells", config.cells},
                 {"robots", config.robots},
                 {"speed_ratio", config.speed_ratio},
                 {"trials", config.trials},
                 {"master_seed", config.master_seed}};
  auto& jr = j["trials"] = nlohmann::json::array();
  for (const TrialRow& r : rows)
    jr.push_back({{"sweep_param", r.sweep_param},
                  {"trial", r.trial},
                  {"seed", r.seed},
                  {"C", r.cells},
                  {"R", r.robots},
                  {"S_r", r.robot_speed},
                  {"S_p", r.roi_speed},
                  {"alg_time", r.alg_time},
                  {"t_last", r.t_last},
                  {"d_max", r.max_depth},
                  {"L", r.total_edge_length},
                  {"upper_bound", r.upper_bound},
                  {"lower_bound_grid", r.lower_bound_grid},
                  {"lawnmower_bound", r.lawnmower_bound},
                  {"reward_lhs", r.reward_lhs},
                  {"reward_rhs", r.reward_rhs}});
  auto& ja = j["aggregates"] = nlohmann::json::array();
  for (const PointAggregate& a : aggregates)
    ja.push_back({{"sweep_param", a.sweep_param},
                  {"mean_alg_time", a.mean_alg_time},
                  {"min_alg_time", a.min_alg_time},
                  {"max_alg_time", a.max_alg_time},
                  {"mean_upper", a.mean_upper},
                  {"mean_lower", a.mean_lower},
                  {"mean_lawnmower", a.mean_lawnmower}});
  return j.dump(2);
}

bool VerificationReport::all_pass() const {
  return std::all_of(entries.begin(), entries.end(),
                     [](const VerificationEntry& e) { return e.pass; });
}

std::string VerificationReport::to_text() const {
  std::ostringstream out;
  for (const VerificationEntry& e : entries)
    out << (e.pass ? "PASS  " : "FAIL  ") << e.name
        << (e.detail.empty() ? "" : "  (" + e.detail + ")") << '\n';
  out << (all_pass() ? "all checks passed" : "CHECKS FAILED") << '\n';
  return out.str();
}

std::vector<std::vector<Cell>> enumerate_connected_cell_sets(int max_cells) {
  if (max_cells < 1) throw std::invalid_argument("max_cells must be >= 1");

  auto canonical = [](std::vector<Cell> cells) {
    int mx = cells[0].x, my = cells[0].y;
    for (const Cell& c : cells) {
      mx = std::min(mx, c.x);
      my = std::min(my, c.y);
    }
    for (Cell& c : cells) {
      c.x -= mx;
      c.y -= my;
    }
    std::sort(cells.begin(), cells.end());
    return cells;
  };
  auto key_of = [](const std::vector<Cell>& cells) {
    std::string key;
    for (const Cell& c : cells)
      key += std::to_string(c.x) + "," + std::to_string(c.y) + ";";
    return key;
  };

  std::vector<std::vector<Cell>> all;
  std::vector<std::vector<Cell>> level{{{0, 0}}};
  all.push_back(level[0]);
  for (int n = 2; n <= max_cells; ++n) {
    std::set<std::string> seen;
    std::vector<std::vector<Cell>> next;
    for (const auto& shape : level) {
      CellSet members(shape.begin(), shape.end());
      for (const Cell& c : shape) {
        for (Direction d : kDirectionOrder) {
          const Cell ext = offset(c, d);
          if (members.count(ext)) continue;
          std::vector<Cell> grown = shape;
          grown.push_back(ext);
          grown = canonical(std::move(grown));
          if (seen.insert(key_of(grown)).second) next.push_back(grown);
        }
      }
    }
    for (const auto& shape : next) all.push_back(shape);
    level = std::move(next);
  }
  return all;
}

namespace {

VerificationEntry check_small_instances(VerificationTier tier, uint64_t master_seed) {
  VerificationEntry entry;
  entry.name = "optimal-oracle comparisons on small maps";

  int instances = 0;
  double worst_margin = std::numeric_limits<double>::infinity();
  std::string failure;

  auto run_instance = [&](const GridRoi& world, int robots, double robot_speed,
                          double roi_speed) {
    const ExplorationRun run = explore(world, {robots, robot_speed, roi_speed});
    const double opt = brute_force_opt(world, robots, robot_speed, roi_speed);
    const double rhs =
        competitive_rhs(opt, robots, robot_speed, roi_speed, RatioVariant::Grid);
    const double lower =
        lower_bound_grid(world.cell_count(), robots, robot_speed, roi_speed);
    const RewardAudit audit = audit_rewards(run);
    ++instances;
    worst_margin = std::min(worst_margin, rhs - run.total_time);
    if (run.total_time > rhs + kSlack) failure = "alg above competitive rhs";
    if (opt + kSlack < lower) failure = "oracle below grid lower bound";
    if (!audit.ok) failure = "reward audit";
    if (tier == VerificationTier::Full) {
      const double opt1 = brute_force_opt(world, 1, robot_speed, roi_speed);
      const double opt2 = brute_force_opt(world, 2, robot_speed, roi_speed);
      if (opt2 > opt1 + kSlack || opt1 > 2.0 * opt2 + kSlack)
        failure = "two-robot oracle inequality";
    }
  };

  const int max_cells = 6;
  const auto shapes = enumerate_connected_cell_sets(max_cells);
  for (const auto& shape : shapes) {
    for (std::size_t s = 0; s < shape.size(); ++s) {
      for (int robots : {1, 2}) {
        const GridRoi world_static =
            GridRoi::from_cells(shape, Direction::North, 0.0, shape[s]);
        run_instance(world_static, robots, 1.0, 0.0);
        if (tier == VerificationTier::Full) {
          for (Direction dir : kDirectionOrder) {
            const GridRoi world = GridRoi::from_cells(shape, dir, 0.5, shape[s]);
            run_instance(world, robots, 1.5, 0.5);
          }
        }
      }
    }
  }

  const int random_count = tier == VerificationTier::Quick ? 50 : 200;
  for (int i = 0; i < random_count; ++i) {
    const uint64_t seed = mix_seed(master_seed, 0xb01dULL, i);
    const GridRoi world = generate_random_roi(2 + i % 5, seed);
    for (int robots : {1, 2}) run_instance(world, robots, 1.0, 0.0);
  }

  entry.pass = failure.empty();
  entry.detail = failure.empty()
                     ? std::to_string(instances) +
                           " instances, min rhs margin " + fmt(worst_margin)
                     : failure;
  return entry;
}

VerificationEntry check_geometry(VerificationTier tier, uint64_t master_seed) {
  VerificationEntry entry;
  entry.name = "grid-approximation inequalities on random fat shapes";
  const int shapes = tier == VerificationTier::Quick ? 50 : 200;
  std::string failure;
  for (int i = 0; i < shapes && failure.empty(); ++i) {
    const FatPolygon poly = random_fat_shape(mix_seed(master_seed, 0x9e0ULL, i));
    const ApproximationReport r = verify_approximation_bounds(poly);
    if (!r.outer_bound_ok)
      failure = "outer/inner inequality failed at shape " + std::to_string(i);
    if (!r.best_bound_ok)
      failure = "best-grid inequality failed at shape " + std::to_string(i);
    const GridApproximation ga = rasterize(poly, {0.0, 0.0});
    CellSet outer(ga.outer_cells.begin(), ga.outer_cells.end());
    for (const Cell& c : ga.inner_cells)
      if (!outer.count(c)) failure = "inner cell outside outer set";
  }
  entry.pass = failure.empty();
  entry.detail = failure.empty() ? std::to_string(shapes) + " shapes" : failure;
  return entry;
}

VerificationEntry check_reward_audits(VerificationTier tier, uint64_t master_seed) {
  VerificationEntry entry;
  entry.name = "reward audits on default-size trials";
  const int trials = tier == VerificationTier::Quick ? 20 : 100;
  std::string failure;
  for (int t = 0; t < trials && failure.empty(); ++t) {
    const uint64_t seed = mix_seed(master_seed, 0xaad1ULL, t);
    const GridRoi world = generate_random_roi(120, seed);
    const ExplorationRun run = explore(world, {20, 2.5, 1.0});
    const RewardAudit audit = audit_rewards(run);
    const double upper = upper_bound(run.cell_count, run.max_depth, 20, 2.5, 1.0);
    if (!audit.ok) failure = "audit failed at seed " + std::to_string(seed);
    if (run.total_time > upper * (1.0 + kSlack))
      failure = "upper bound failed at seed " + std::to_string(seed);
  }
  entry.pass = failure.empty();
  entry.detail = failure.empty() ? std::to_string(trials) + " trials" : failure;
  return entry;
}

VerificationEntry check_sensing(uint64_t master_seed) {
  VerificationEntry entry;
  entry.name = "sensing statistics";
  std::string failure;

  // Per-detection rates: a single-sample model makes classify_cell one draw.
  const double p_fp = 27.0 / 483.0, p_fn = 53.0 / 483.0;
  const long draws = 100000;
  {
    SensorModel single{p_fp, p_fn, 1, 1, 0};
    Rng rng(mix_seed(master_seed, 0x5e5ULL, 1));
    long fp = 0, fn = 0;
    for (long i = 0; i < draws; ++i)
      if (classify_cell(false, single, rng)) ++fp;
    for (long i = 0; i < draws; ++i)
      if (!classify_cell(true, single, rng)) ++fn;
    const double sd_fp = std::sqrt(p_fp * (1 - p_fp) / draws);
    const double sd_fn = std::sqrt(p_fn * (1 - p_fn) / draws);
    if (std::abs(static_cast<double>(fp) / draws - p_fp) > 3 * sd_fp)
      failure = "false-positive rate off";
    if (std::abs(static_cast<double>(fn) / draws - p_fn) > 3 * sd_fn)
      failure = "false-negative rate off";
  }

  // Cell-level miss rate for p_fn = 0.2 against the closed-form binomial.
  {
    SensorModel model{0.0, 0.2, 5, 3, 0};
    Rng rng(mix_seed(master_seed, 0x5e5ULL, 2));
    long miss = 0;
    const double expected = 0.05792;
    for (long i = 0; i < draws; ++i)
      if (!classify_cell(true, model, rng)) ++miss;
    const double sd = std::sqrt(expected * (1 - expected) / draws);
    if (std::abs(static_cast<double>(miss) / draws - expected) > 3 * sd)
      failure = "cell-level miss rate off";
  }

  // Sticky growth of the believed set across a noisy run.
  {
    const GridRoi world = generate_random_roi(40, mix_seed(master_seed, 0x5e5ULL, 3));
    NoisySession session(world, {2, 1.0, 0.0},
                         {p_fp, p_fn, 5, 3, mix_seed(master_seed, 0x5e5ULL, 4)});
    int prev = 0;
    while (!session.done()) {
      session.advance();
      const std::string doc = session.save_resume_state();
      const BeliefMap snapshot = BeliefMap::deserialize(
          nlohmann::json::parse(doc).at("belief").dump());
      const int now = snapshot.believed_roi_count();
      if (now < prev) failure = "believed set shrank";
      prev = now;
    }
  }

  entry.pass = failure.empty();
  entry.detail = failure.empty() ? "rates within 3 sigma" : failure;
  return entry;
}

}  // namespace

VerificationReport run_verification(VerificationTier tier, uint64_t master_seed) {
  VerificationReport report;
  report.entries.push_back(check_small_instances(tier, master_seed));
  report.entries.push_back(check_geometry(tier, master_seed));
  report.entries.push_back(check_reward_audits(tier, master_seed));
  if (tier == VerificationTier::Full)
    report.entries.push_back(check_sensing(master_seed));
  return report;
}

}  // namespace roix
