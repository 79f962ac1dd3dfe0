#pragma once

#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "roix/grid_world.hpp"

namespace roix {

enum class VertexState { Unexplored, UnderExploration, Explored };

const char* vertex_state_name(VertexState s);
VertexState vertex_state_from_name(const std::string& name);

using VertexId = int;
inline constexpr VertexId kNoVertex = -1;

/// One node of the online exploration tree. Dummy vertices carry no cell of
/// their own; `anchor` is the cell the robots physically occupy when standing
/// at the vertex (the owning cell, or the parent's anchor for a dummy).
struct Vertex {
  VertexId id = kNoVertex;
  std::optional<Cell> cell;  // nullopt marks a dummy vertex
  Cell anchor{0, 0};
  VertexState state = VertexState::Unexplored;
  VertexId parent = kNoVertex;
  std::vector<VertexId> children;  // at most 2
  int edge_length = 0;             // to parent: 0 for a dummy edge, else 1

  bool is_dummy() const { return !cell.has_value(); }
  bool is_leaf() const { return children.empty(); }
};

struct BackboneDecomposition {
  std::vector<VertexId> backbone;   // root-to-leaf vertex path
  std::vector<VertexId> rib_roots;  // top vertex of each subtree hanging off it
  int backbone_length = 0;          // in length units (dummy edges contribute 0)
  int max_depth = 0;                // distance of the farthest vertex from root
};

/// The binary tree built online over ROI cells. Enforces the structural
/// contract: at most two children per vertex, one vertex per cell, edges of
/// length 1 except dummy edges of length 0, and monotone vertex states.
class ExplorationTree {
 public:
  ExplorationTree() = default;

  VertexId add_root(Cell cell);

  /// Attaches a new unexplored vertex for `cell` under `parent` with a unit
  /// edge. Throws std::logic_error if the cell is already in the tree (cycle
  /// prevention) or the parent already has two children.
  VertexId add_child(VertexId parent, Cell cell);

  /// Inserts a dummy vertex (zero-length edge) as a child of `parent` so more
  /// children can attach below while the tree stays binary.
  VertexId insert_dummy(VertexId parent);

  /// Attaches up to four pending cells under `parent`, inserting dummy
  /// vertices as needed. Returns the ids created for `cells`, in order.
  std::vector<VertexId> attach_children(VertexId parent, std::span<const Cell> cells);

  /// Forward-only transitions: Unexplored -> UnderExploration -> Explored.
  /// Setting the current state again is a no-op; regressions throw.
  void set_state(VertexId v, VertexState s);

  const Vertex& vertex(VertexId v) const { return vertices_.at(v); }
  VertexId root() const { return root_; }
  int vertex_count() const { return static_cast<int>(vertices_.size()); }
  bool contains_cell(Cell c) const { return by_cell_.count(c) != 0; }
  VertexId vertex_for_cell(Cell c) const;

  /// Root distance in length units.
  int depth(VertexId v) const;

  /// Sum of all edge lengths; equals (real non-root vertex count).
  int total_edge_length() const;

  int real_vertex_count() const;

  bool all_explored() const;

  /// Longest root-to-leaf decomposition (ties: smaller child index at each
  /// step), so backbone_length == max_depth.
  BackboneDecomposition decompose() const;

  /// Decomposition whose backbone ends at the given leaf. max_depth is still
  /// the farthest-vertex distance of the whole tree.
  BackboneDecomposition decompose_to(VertexId leaf) const;

  /// JSON round-trip of structure and states (also the resume-state core).
  std::string serialize() const;
  static ExplorationTree deserialize(const std::string& json_text);

 private:
  std::vector<Vertex> vertices_;
  VertexId root_ = kNoVertex;
  std::unordered_map<Cell, VertexId, CellHash> by_cell_;
};

}  // namespace roix
