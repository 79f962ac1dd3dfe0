#pragma once

#include <string>
#include <vector>

#include "roix/dfs_explorer.hpp"
#include "roix/grid_world.hpp"

namespace roix {

/// floor(log2 robots); the group-splitting rule halves groups, so this is the
/// splitting depth that enters every multi-robot bound.
int log2_floor(int robots);

/// (robot_speed - roi_speed) * (1 + floor(log2 robots)): the normalizer
/// shared by all competitive-ratio forms.
double bound_normalizer(int robots, double robot_speed, double roi_speed);

/// Worst-case completion-time bound for the multi-robot recursive DFS:
///   2 (C + d_max * floor(log2 R)) / ((S_r - S_p)(1 + floor(log2 R))).
double upper_bound(int cell_count, int max_depth, int robots, double robot_speed,
                   double roi_speed);

/// Closed forms of the special cases, plus the tightened single-robot
/// translating bound 2 S_r C / ((S_r + S_p)(S_r - S_p)). The srtr/srsr fields
/// describe single-robot execution; mrsr is the static multi-robot form.
struct SpecialCaseBounds {
  double mrsr = 0.0;
  double srtr = 0.0;
  double srtr_tight = 0.0;
  double srsr = 0.0;
};
SpecialCaseBounds special_case_bounds(int cell_count, int max_depth, int robots,
                                      double robot_speed, double roi_speed);

/// Optimal-algorithm lower bound over the grid: (C - 1) / ((S_r + S_p) R).
double lower_bound_grid(int cell_count, int robots, double robot_speed,
                        double roi_speed);

enum class RatioVariant { Grid, Arbitrary };

/// Right side of the competitive-ratio statement for a given optimal time:
///   grid:      2 (S_r+S_p)(R + floor(log2 R))   / M * opt +  2 / M
///   arbitrary: 2 (S_r+S_p)(18R + floor(log2 R)) / M * opt + 48 / M
/// with M = (S_r - S_p)(1 + floor(log2 R)).
double competitive_rhs(double opt, int robots, double robot_speed, double roi_speed,
                       RatioVariant variant);

enum class EdgeKind { Rib, Backbone };

/// Per-edge account of the reward replay. Edges are keyed by their child
/// vertex; dummy edges carry zero length and collect nothing.
struct RewardEdge {
  VertexId child = kNoVertex;
  EdgeKind kind = EdgeKind::Rib;
  int length = 0;
  int forward_collections = 0;
  int backward_collections = 0;
  double reward_collected = 0.0;
};

struct RewardAudit {
  double lhs = 0.0;       // (S_r - S_p)(1 + floor(log2 R)) * t_last
  double total = 0.0;     // rewards collected under rules 1-4
  double rhs = 0.0;       // 2(L - b) + (1 + floor(log2 R)) b, b = audit backbone
  double rhs_max_depth = 0.0;  // same form with d_max instead of b
  int backbone_length = 0;
  bool ok = false;        // lhs <= total <= rhs
  std::vector<RewardEdge> ledger;
};

/// Replays the run's group traversals against the backbone that ends at the
/// last-first-visited leaf and collects rewards: one forward and one backward
/// collection per rib edge; (1 + floor(log2 R)) shared streams per backbone
/// edge, the first forward group drawing one per robot and every later group
/// traversal drawing one while any remain. Checks
///   lhs <= total <= rhs.
RewardAudit audit_rewards(const ExplorationRun& run);

/// Exact optimal exploration makespan for tiny instances: minimum over all
/// assignments of cells to robots and visit orders per robot of the longest
/// tour, where every hop (adjacent or not; the optimum may fly outside the
/// ROI) is costed by relative_travel_time. Caps: cell_count <= 8, robots <= 2.
double brute_force_opt(const GridRoi& world, int robots, double robot_speed,
                       double roi_speed);

/// Clairvoyant lawn-mower baseline: knows the tight bounding rectangle,
/// splits it into R strips along either axis, sweeps each strip row by row
/// with direction-dependent per-cell times, ignores transit from the start,
/// and returns the better of the two splits.
double lawnmower_lower_bound(const GridRoi& world, int robots, double robot_speed,
                             double roi_speed);

/// Every closed-form bound evaluated for one run's realized parameters.
struct BoundsReport {
  double upper = 0.0;
  double lower_grid = 0.0;
  double lawnmower = 0.0;
  double competitive_grid_slope = 0.0;  // coefficient of opt in the grid rhs
  double competitive_grid_offset = 0.0;
  double normalizer = 0.0;  // M
  SpecialCaseBounds special;
};
BoundsReport make_bounds_report(const ExplorationRun& run, const GridRoi& world);

}  // namespace roix
