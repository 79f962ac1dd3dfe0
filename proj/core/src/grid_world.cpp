#include "roix/grid_world.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

#include "roix/rng.hpp"

#include <json.hpp>

namespace roix {

const char* direction_name(Direction d) {
  switch (d) {
    case Direction::North: return "N";
    case Direction::East: return "E";
    case Direction::South: return "S";
    case Direction::West: return "W";
  }
  return "?";
}

Direction direction_from_name(const std::string& name) {
  if (name == "N") return Direction::North;
  if (name == "E") return Direction::East;
  if (name == "S") return Direction::South;
  if (name == "W") return Direction::West;
  throw std::invalid_argument("unknown direction name: " + name);
}

GridRoi GridRoi::from_cells(std::vector<Cell> cells, Direction translation_dir,
                            double roi_speed, Cell start_cell) {
  if (cells.empty()) throw std::invalid_argument("GridRoi needs at least one cell");
  if (roi_speed < 0.0) throw std::invalid_argument("roi_speed must be >= 0");

  GridRoi roi;
  roi.cells_ = std::move(cells);
  roi.cell_set_.reserve(roi.cells_.size() * 2);
  for (const Cell& c : roi.cells_) {
    if (!roi.cell_set_.insert(c).second)
      throw std::invalid_argument("duplicate cell in GridRoi");
  }
  if (!roi.cell_set_.count(start_cell))
    throw std::invalid_argument("start_cell is not an ROI cell");

  // 4-connectivity: BFS from the start must reach every cell.
  CellSet seen;
  seen.insert(start_cell);
  std::deque<Cell> queue{start_cell};
  while (!queue.empty()) {
    Cell c = queue.front();
    queue.pop_front();
    for (Direction d : kDirectionOrder) {
      Cell n = offset(c, d);
      if (roi.cell_set_.count(n) && seen.insert(n).second) queue.push_back(n);
    }
  }
  if (seen.size() != roi.cell_set_.size())
    throw std::invalid_argument("GridRoi cells are not 4-connected");

  roi.translation_dir_ = translation_dir;
  roi.roi_speed_ = roi_speed;
  roi.start_cell_ = start_cell;
  return roi;
}

void GridRoi::bounding_box(Cell& lo, Cell& hi) const {
  lo = hi = cells_.front();
  for (const Cell& c : cells_) {
    lo.x = std::min(lo.x, c.x);
    lo.y = std::min(lo.y, c.y);
    hi.x = std::max(hi.x, c.x);
    hi.y = std::max(hi.y, c.y);
  }
}

GridRoi generate_random_roi(int cell_count, uint64_t seed) {
  if (cell_count < 1) throw std::invalid_argument("cell_count must be >= 1");

  Rng rng(seed);
  const Direction dir = kDirectionOrder[rng.next_below(4)];

  std::vector<Cell> cells;
  cells.reserve(cell_count);
  CellSet in_roi;
  CellSet in_frontier;
  std::vector<Cell> frontier;

  auto add_cell = [&](Cell c) {
    cells.push_back(c);
    in_roi.insert(c);
    for (Direction d : kDirectionOrder) {
      Cell n = offset(c, d);
      if (!in_roi.count(n) && in_frontier.insert(n).second) frontier.push_back(n);
    }
  };

  add_cell({0, 0});
  while (static_cast<int>(cells.size()) < cell_count) {
    const uint32_t idx = rng.next_below(static_cast<uint32_t>(frontier.size()));
    Cell pick = frontier[idx];
    frontier[idx] = frontier.back();
    frontier.pop_back();
    in_frontier.erase(pick);
    add_cell(pick);
  }

  return GridRoi::from_cells(std::move(cells), dir, 0.0, {0, 0});
}

NeighborFlags sense_neighbors(Cell cell, const GridRoi& roi) {
  if (!roi.contains(cell))
    throw std::logic_error("sense_neighbors queried outside the ROI");
  NeighborFlags f;
  for (Direction d : kDirectionOrder) f.set(d, roi.contains(offset(cell, d)));
  return f;
}

std::string save_scenario(const GridRoi& roi) {
  nlohmann::json j;
  j["cells"] = nlohmann::json::array();
  for (const Cell& c : roi.cells()) j["cells"].push_back({c.x, c.y});
  j["translation_dir"] = direction_name(roi.translation_dir());
  j["S_p"] = roi.roi_speed();
  j["start_cell"] = {roi.start_cell().x, roi.start_cell().y};
  return j.dump(2);
}

GridRoi load_scenario(const std::string& json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text);
  std::vector<Cell> cells;
  for (const auto& jc : j.at("cells"))
    cells.push_back({jc.at(0).get<int>(), jc.at(1).get<int>()});
  const Direction dir = direction_from_name(j.at("translation_dir").get<std::string>());
  const double speed = j.at("S_p").get<double>();
  const Cell start{j.at("start_cell").at(0).get<int>(), j.at("start_cell").at(1).get<int>()};
  return GridRoi::from_cells(std::move(cells), dir, speed, start);
}

}  // namespace roix
