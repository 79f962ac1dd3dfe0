#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <unordered_set>
#include <vector>

namespace roix {

struct Cell {
  int x = 0;
  int y = 0;
  auto operator<=>(const Cell&) const = default;
};

struct CellHash {
  std::size_t operator()(const Cell& c) const {
    const uint64_t k = (static_cast<uint64_t>(static_cast<uint32_t>(c.x)) << 32) |
                       static_cast<uint32_t>(c.y);
    uint64_t z = k + 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    return static_cast<std::size_t>(z ^ (z >> 31));
  }
};

using CellSet = std::unordered_set<Cell, CellHash>;

enum class Direction { North, East, South, West };

// Fixed scan order used everywhere a tie among neighbors must be broken.
inline constexpr std::array<Direction, 4> kDirectionOrder = {
    Direction::North, Direction::East, Direction::South, Direction::West};

inline Cell offset(Cell c, Direction d) {
  switch (d) {
    case Direction::North: return {c.x, c.y + 1};
    case Direction::East: return {c.x + 1, c.y};
    case Direction::South: return {c.x, c.y - 1};
    case Direction::West: return {c.x - 1, c.y};
  }
  return c;
}

inline Direction opposite(Direction d) {
  switch (d) {
    case Direction::North: return Direction::South;
    case Direction::East: return Direction::West;
    case Direction::South: return Direction::North;
    case Direction::West: return Direction::East;
  }
  return d;
}

const char* direction_name(Direction d);
Direction direction_from_name(const std::string& name);

/// Membership flags for the four grid neighbors of a cell, in N,E,S,W order.
struct NeighborFlags {
  std::array<bool, 4> flags{false, false, false, false};

  bool at(Direction d) const { return flags[static_cast<int>(d)]; }
  void set(Direction d, bool v) { flags[static_cast<int>(d)] = v; }
  bool any() const { return flags[0] || flags[1] || flags[2] || flags[3]; }
};

/// Ground-truth environment: a 4-connected set of unit cells in the ROI's
/// co-moving frame, plus the translation the frame rides on. Immutable after
/// construction; safe to share read-only across concurrent trials.
class GridRoi {
 public:
  /// Validates connectivity and start membership; throws std::invalid_argument.
  static GridRoi from_cells(std::vector<Cell> cells, Direction translation_dir,
                            double roi_speed, Cell start_cell);

  const std::vector<Cell>& cells() const { return cells_; }
  bool contains(Cell c) const { return cell_set_.count(c) != 0; }
  int cell_count() const { return static_cast<int>(cells_.size()); }
  Direction translation_dir() const { return translation_dir_; }
  double roi_speed() const { return roi_speed_; }
  Cell start_cell() const { return start_cell_; }

  /// Tightest axis-aligned cell bounding box, inclusive on both corners.
  void bounding_box(Cell& lo, Cell& hi) const;

 private:
  GridRoi() = default;

  std::vector<Cell> cells_;
  CellSet cell_set_;
  Direction translation_dir_ = Direction::North;
  double roi_speed_ = 0.0;
  Cell start_cell_{0, 0};
};

/// Seeded frontier growth from (0,0): repeatedly adds a uniformly random
/// frontier cell until the set has cell_count cells, so connectivity holds by
/// construction. The translation direction is drawn uniformly from the same
/// seed. Deterministic: equal (cell_count, seed) gives equal ROIs.
GridRoi generate_random_roi(int cell_count, uint64_t seed);

/// Perfect sensor: which of the four neighbors of `cell` are ROI cells.
/// `cell` must itself belong to the ROI.
NeighborFlags sense_neighbors(Cell cell, const GridRoi& roi);

/// Scenario file round-trip (JSON text with fields
/// {cells, translation_dir, S_p, start_cell}).
std::string save_scenario(const GridRoi& roi);
GridRoi load_scenario(const std::string& json_text);

}  // namespace roix
