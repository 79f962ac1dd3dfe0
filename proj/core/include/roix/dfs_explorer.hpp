#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "roix/exploration_tree.hpp"
#include "roix/grid_world.hpp"

namespace roix {

/// Time for one unit edge in the ROI frame. Moving in the drift direction the
/// target recedes (closing speed robot_speed - roi_speed); moving against it
/// the target approaches; perpendicular motion must cancel the drift
/// component, leaving sqrt(robot_speed^2 - roi_speed^2).
double traversal_time(Direction move_dir, double robot_speed, double roi_speed,
                      Direction translation_dir);

/// Time to fly displacement (dx, dy) in the ROI frame at ground speed
/// robot_speed while the frame drifts at roi_speed along translation_dir:
/// the constant-bearing intercept of a point fixed in the moving frame.
/// Reduces to traversal_time for unit axis moves.
double relative_travel_time(double dx, double dy, double robot_speed,
                            double roi_speed, Direction translation_dir);

struct ExploreParams {
  int robot_count = 1;
  double robot_speed = 1.0;
  double roi_speed = 0.0;
};

/// One group-move along a tree edge, as scheduled by the simulator.
struct Traversal {
  double depart = 0.0;
  double arrive = 0.0;
  VertexId from = kNoVertex;
  VertexId to = kNoVertex;
  std::vector<int> robots;  // sorted member ids
};

struct ExplorationRun {
  double total_time = 0.0;      // last robot back at the root (the objective)
  double last_leaf_time = 0.0;  // last leaf of the final tree first visited
  std::vector<std::vector<std::pair<VertexId, double>>> trajectories;  // per robot
  std::vector<Traversal> traversals;
  ExplorationTree tree;
  ExploreParams params;
  Direction translation_dir = Direction::North;
  int cell_count = 0;         // real vertices in the final tree
  int max_depth = 0;          // farthest vertex distance from root
  int total_edge_length = 0;  // L
};

/// Event-driven executor of the multi-robot recursive DFS. The sense callback
/// is queried once per real vertex, on first arrival; groups arriving at the
/// same vertex at the same instant merge; same-time batches are processed in
/// ascending group id (smallest member robot). Deterministic: no randomness
/// inside, and a total event order is maintained.
class DfsSimulator {
 public:
  using SenseFn = std::function<NeighborFlags(Cell)>;

  DfsSimulator(Cell start, ExploreParams params, Direction translation_dir,
               SenseFn sense);

  bool done() const { return pending_.empty(); }

  /// Processes the next same-time event batch. Returns false when finished.
  bool advance();

  int batches_processed() const { return batches_; }

  /// Only valid once done(): assembles the run record.
  ExplorationRun take_run() &&;

  const ExplorationTree& tree() const { return tree_; }

  /// Checkpoint of the full simulator state (tree, in-flight groups, clock,
  /// logs) as a versioned JSON document. Restoring needs the sense callback
  /// supplied again; it is not part of the state.
  std::string save_state() const;
  static DfsSimulator restore(const std::string& json_text, SenseFn sense);

 private:
  struct InFlight {
    double arrive = 0.0;
    VertexId dest = kNoVertex;
    std::vector<int> robots;
  };

  explicit DfsSimulator(SenseFn sense) : sense_(std::move(sense)) {}

  void push_group(double depart, VertexId from, VertexId to, std::vector<int> robots);
  void step_group(VertexId at, std::vector<int> robots, double now);
  double edge_time(VertexId from, VertexId to) const;

  ExploreParams params_;
  Direction translation_dir_ = Direction::North;
  SenseFn sense_;
  ExplorationTree tree_;
  std::vector<InFlight> pending_;  // min-heap on (arrive, robots.front())
  std::vector<std::pair<std::vector<int>, double>> parked_;
  std::vector<std::vector<std::pair<VertexId, double>>> trajectories_;
  std::vector<Traversal> traversals_;
  long events_ = 0;
  int batches_ = 0;
};

/// Runs Algorithm-style exploration to completion on a ground-truth world
/// with the perfect sensor and returns the full run record. Throws if the
/// event budget is exceeded (internal error guard).
ExplorationRun explore(const GridRoi& world, const ExploreParams& params);

struct BoundingBox {
  Cell lo{0, 0};
  Cell hi{0, 0};
};

struct SweepDetection {
  Cell entry{0, 0};
  double elapsed = 0.0;
};

/// Boustrophedon sweep of a bounding box at one-cell row spacing, sensing the
/// occupied cell at every stop; returns the first ROI hit and the elapsed
/// time. The ROI is treated as stationary for the sweep. Throws if the sweep
/// exhausts the box without a detection.
SweepDetection find_roi_sweep(const BoundingBox& box, Cell start,
                              double robot_speed, const GridRoi& roi);

}  // namespace roix
