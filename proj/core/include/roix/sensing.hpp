#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "roix/dfs_explorer.hpp"
#include "roix/grid_world.hpp"
#include "roix/rng.hpp"

namespace roix {

/// Per-image Bernoulli error model standing in for the field camera pipeline:
/// each of samples_per_cell detections flips independently with probability
/// p_fn (for true cells) or p_fp (for non-cells); the cell-level outcome is a
/// majority vote.
struct SensorModel {
  double p_fp = 0.0;
  double p_fn = 0.0;
  int samples_per_cell = 5;
  int majority_threshold = 3;
  uint64_t rng_seed = 0;
};

/// One cell-level detection: samples_per_cell image draws, majority vote.
bool classify_cell(bool true_is_roi, const SensorModel& model, Rng& rng);

enum class BeliefLabel { Unknown, NonRoi, RoiUnexplored, RoiExplored };

const char* belief_label_name(BeliefLabel l);
BeliefLabel belief_label_from_name(const std::string& name);

/// Sticky-positive map: once a cell is believed ROI it never reverts, while a
/// non-ROI verdict can be overturned by later positive evidence.
class BeliefMap {
 public:
  BeliefLabel label(Cell c) const;
  void update(Cell c, bool detection);
  void mark_explored(Cell c);  // RoiUnexplored -> RoiExplored

  int believed_roi_count() const;
  std::vector<Cell> believed_roi_cells() const;  // sorted

  std::string serialize() const;
  static BeliefMap deserialize(const std::string& json_text);

 private:
  std::unordered_map<Cell, BeliefLabel, CellHash> labels_;
};

struct Confusion {
  long tp = 0;
  long fp = 0;
  long tn = 0;
  long fn = 0;
};

struct NoisyExplorationResult {
  ExplorationRun run;
  BeliefMap belief;
  Confusion confusion;        // cell-level detections vs ground truth
  double iou = 0.0;           // believed-ROI vs true-ROI intersection over union
  int true_cells_missed = 0;  // true ROI cells absent from the final belief
  bool disconnected = false;  // some true cells were unreachable through belief
};

/// Stepwise noisy exploration with checkpoint support. The traversal logic is
/// the same recursive-DFS simulator; only the sensor is replaced by the
/// classifier, so the tree grows over believed-ROI cells. One session owns
/// one RNG stream; concurrent runs need separate seeded sessions.
class NoisySession {
 public:
  NoisySession(const GridRoi& world, ExploreParams params, SensorModel model);

  bool done() const;
  void advance();  // one event batch

  /// Serializes tree, in-flight groups, clock, belief, RNG and counters into
  /// a versioned document. Valid between event batches.
  std::string save_resume_state() const;

  /// Rebuilds a session from a document; the ground-truth world is supplied
  /// by the environment, not the document. Throws on malformed or
  /// version-mismatched input without touching any existing state.
  static NoisySession load_resume_state(const std::string& json_text,
                                        const GridRoi& world);

  /// Valid once done().
  NoisyExplorationResult finish() &&;

 private:
  // The sense callback handed to the simulator points at this heap block, so
  // moving the session does not invalidate it.
  struct Context {
    const GridRoi* world = nullptr;
    SensorModel model;
    Rng rng{0};
    BeliefMap belief;
    Confusion confusion;
  };

  explicit NoisySession(std::unique_ptr<Context> ctx) : ctx_(std::move(ctx)) {}
  static NeighborFlags sense(Context& ctx, Cell c);

  std::unique_ptr<Context> ctx_;
  std::unique_ptr<DfsSimulator> sim_;
};

/// Convenience wrapper: runs a noisy session to completion.
NoisyExplorationResult noisy_explore(const GridRoi& world, ExploreParams params,
                                     SensorModel model);

}  // namespace roix
