#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "roix/analysis.hpp"
#include "roix/grid_world.hpp"

namespace roix {

enum class SweepKind { Cells, Robots, SpeedRatio, Single };

const char* sweep_kind_name(SweepKind k);
SweepKind sweep_kind_from_name(const std::string& name);

/// The sweep grid the experiment walks when the config leaves it empty:
/// CELLS {40..200 step 40}, ROBOTS {1,2,4,8,16,32}, SPEED_RATIO
/// {1.5,2,2.5,3,4}, SINGLE {one point at the fixed defaults}.
std::vector<double> default_sweep_grid(SweepKind kind);

enum class OutputFormat { Csv, Json };

struct ExperimentConfig {
  SweepKind sweep = SweepKind::Single;
  int cells = 120;           // fixed C when not swept
  int robots = 20;           // fixed R when not swept
  double speed_ratio = 2.5;  // fixed S_r/S_p when not swept; S_p normalized to 1
  int trials = 100;
  uint64_t master_seed = 1;
  std::vector<double> grid;  // sweep values; empty = default_sweep_grid
  OutputFormat format = OutputFormat::Csv;
};

struct TrialRow {
  double sweep_param = 0.0;
  int trial = 0;
  uint64_t seed = 0;
  int cells = 0;
  int robots = 0;
  double robot_speed = 0.0;
  double roi_speed = 0.0;
  double alg_time = 0.0;
  double t_last = 0.0;
  int max_depth = 0;
  int total_edge_length = 0;
  double upper_bound = 0.0;
  double lower_bound_grid = 0.0;
  double lawnmower_bound = 0.0;
  double reward_lhs = 0.0;
  double reward_rhs = 0.0;
};

struct PointAggregate {
  double sweep_param = 0.0;
  double mean_alg_time = 0.0;
  double min_alg_time = 0.0;
  double max_alg_time = 0.0;
  double mean_upper = 0.0;
  double mean_lower = 0.0;
  double mean_lawnmower = 0.0;
};

struct SweepTable {
  ExperimentConfig config;
  std::vector<TrialRow> rows;
  std::vector<PointAggregate> aggregates;

  std::string to_csv() const;
  std::string to_json() const;
};

/// Runs the configured sweep: per point and trial it generates a seeded ROI,
/// explores it, evaluates every bound and the reward audit, and aggregates.
/// A violation of the proven bounds (upper or grid lower) aborts with the
/// offending seed; the lawnmower baseline and reward-audit sides are emitted
/// as columns for external checking.
SweepTable run_sweep(const ExperimentConfig& config);

enum class VerificationTier { Quick, Full };

struct VerificationEntry {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct VerificationReport {
  std::vector<VerificationEntry> entries;
  bool all_pass() const;
  std::string to_text() const;
};

/// Self-check suites. Quick: exhaustive optimal-oracle comparisons on small
/// maps, grid-approximation sweeps on 50 random fat shapes, reward audits on
/// 20 default-size trials. Full raises the counts (200 shapes, 100 trials)
/// and adds the two-robot-vs-one-robot oracle inequalities plus sensing
/// statistics. Failures become report entries, not exceptions.
VerificationReport run_verification(VerificationTier tier, uint64_t master_seed = 1);

/// All 4-connected cell sets of size 1..max_cells, canonicalized up to
/// translation. Sizes follow the fixed-polyomino counts (1, 2, 6, 19, 63,
/// 216 for n = 1..6).
std::vector<std::vector<Cell>> enumerate_connected_cell_sets(int max_cells);

}  // namespace roix
