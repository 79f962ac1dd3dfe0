#include "roix/dfs_explorer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

namespace roix {

namespace {

void validate_speeds(double robot_speed, double roi_speed) {
  if (!(roi_speed >= 0.0) || !(robot_speed > roi_speed))
    throw std::invalid_argument("need robot_speed > roi_speed >= 0");
}

void drift_unit(Direction d, double& tx, double& ty) {
  tx = ty = 0.0;
  switch (d) {
    case Direction::North: ty = 1.0; break;
    case Direction::East: tx = 1.0; break;
    case Direction::South: ty = -1.0; break;
    case Direction::West: tx = -1.0; break;
  }
}

}  // namespace

double traversal_time(Direction move_dir, double robot_speed, double roi_speed,
                      Direction translation_dir) {
  validate_speeds(robot_speed, roi_speed);
  if (roi_speed == 0.0) return 1.0 / robot_speed;
  if (move_dir == translation_dir) return 1.0 / (robot_speed - roi_speed);
  if (move_dir == opposite(translation_dir)) return 1.0 / (robot_speed + roi_speed);
  return 1.0 / std::sqrt(robot_speed * robot_speed - roi_speed * roi_speed);
}

double relative_travel_time(double dx, double dy, double robot_speed,
                            double roi_speed, Direction translation_dir) {
  validate_speeds(robot_speed, roi_speed);
  const double dist2 = dx * dx + dy * dy;
  if (dist2 == 0.0) return 0.0;
  double tx, ty;
  drift_unit(translation_dir, tx, ty);
  const double along = dx * tx + dy * ty;
  const double denom = robot_speed * robot_speed - roi_speed * roi_speed;
  return (roi_speed * along +
          std::sqrt(roi_speed * roi_speed * along * along + denom * dist2)) /
         denom;
}

DfsSimulator::DfsSimulator(Cell start, ExploreParams params,
                           Direction translation_dir, SenseFn sense)
    : params_(params), translation_dir_(translation_dir), sense_(std::move(sense)) {
  if (params_.robot_count < 1) throw std::invalid_argument("robot_count must be >= 1");
  validate_speeds(params_.robot_speed, params_.roi_speed);
  tree_.add_root(start);
  trajectories_.resize(params_.robot_count);
  std::vector<int> all(params_.robot_count);
  std::iota(all.begin(), all.end(), 0);
  pending_.push_back({0.0, tree_.root(), std::move(all)});
}

namespace {

// Min-heap order with a total tie-break: in-flight robot sets are disjoint,
// so (arrive, smallest member) orders events uniquely and pop order does not
// depend on heap layout.
struct ArriveLater {
  template <typename E>
  bool operator()(const E& a, const E& b) const {
    if (a.arrive != b.arrive) return a.arrive > b.arrive;
    return a.robots.front() > b.robots.front();
  }
};

}  // namespace

double DfsSimulator::edge_time(VertexId from, VertexId to) const {
  const Vertex& f = tree_.vertex(from);
  const Vertex& t = tree_.vertex(to);
  const int dx = t.anchor.x - f.anchor.x;
  const int dy = t.anchor.y - f.anchor.y;
  if (dx == 0 && dy == 0) return 0.0;  // dummy hop, the robots stay put
  Direction dir;
  if (dx == 1) dir = Direction::East;
  else if (dx == -1) dir = Direction::West;
  else if (dy == 1) dir = Direction::North;
  else dir = Direction::South;
  return traversal_time(dir, params_.robot_speed, params_.roi_speed, translation_dir_);
}

void DfsSimulator::push_group(double depart, VertexId from, VertexId to,
                              std::vector<int> robots) {
  const double cost = edge_time(from, to);

  ++events_;
  if (events_ > 100LL * params_.robot_count * (tree_.vertex_count() + 1))
    throw std::runtime_error("exploration event budget exceeded (simulator bug?)");

  traversals_.push_back({depart, depart + cost, from, to, robots});
  pending_.push_back({depart + cost, to, std::move(robots)});
  std::push_heap(pending_.begin(), pending_.end(), ArriveLater{});
}

void DfsSimulator::step_group(VertexId at, std::vector<int> robots, double now) {
  for (int r : robots) trajectories_[r].emplace_back(at, now);

  if (tree_.vertex(at).state == VertexState::Unexplored) {
    if (!tree_.vertex(at).is_dummy()) {
      const Cell cell = *tree_.vertex(at).cell;
      const NeighborFlags flags = sense_(cell);
      std::vector<Cell> fresh;
      for (Direction d : kDirectionOrder) {
        const Cell n = offset(cell, d);
        // Cells already in the tree are never re-added: cycle prevention.
        if (flags.at(d) && !tree_.contains_cell(n)) fresh.push_back(n);
      }
      tree_.attach_children(at, fresh);
    }
    tree_.set_state(at, VertexState::UnderExploration);
  }

  // Fresh subtrees outrank ones another group is already working; within a
  // class, child index order (N,E,S,W at creation) breaks ties.
  std::vector<VertexId> candidates;
  for (VertexId c : tree_.vertex(at).children)
    if (tree_.vertex(c).state != VertexState::Explored) candidates.push_back(c);
  std::stable_sort(candidates.begin(), candidates.end(), [this](VertexId a, VertexId b) {
    return (tree_.vertex(a).state == VertexState::Unexplored) >
           (tree_.vertex(b).state == VertexState::Unexplored);
  });

  if (candidates.size() >= 2 && robots.size() >= 2) {
    // Split as equally as possible; the larger half takes the first child.
    const std::size_t half = (robots.size() + 1) / 2;
    std::vector<int> first(robots.begin(), robots.begin() + half);
    std::vector<int> second(robots.begin() + half, robots.end());
    push_group(now, at, candidates[0], std::move(first));
    push_group(now, at, candidates[1], std::move(second));
  } else if (!candidates.empty()) {
    push_group(now, at, candidates[0], std::move(robots));
  } else {
    // Dead end: every child (if any) is explored, so this vertex is too.
    if (tree_.vertex(at).state != VertexState::Explored)
      tree_.set_state(at, VertexState::Explored);
    if (at == tree_.root())
      parked_.emplace_back(std::move(robots), now);
    else
      push_group(now, at, tree_.vertex(at).parent, std::move(robots));
  }
}

bool DfsSimulator::advance() {
  if (pending_.empty()) return false;

  const double t = pending_.front().arrive;
  std::map<VertexId, std::vector<int>> arrivals;
  while (!pending_.empty() && pending_.front().arrive == t) {
    std::pop_heap(pending_.begin(), pending_.end(), ArriveLater{});
    InFlight e = std::move(pending_.back());
    pending_.pop_back();
    auto& robots = arrivals[e.dest];
    robots.insert(robots.end(), e.robots.begin(), e.robots.end());
  }

  std::vector<std::pair<int, VertexId>> order;
  order.reserve(arrivals.size());
  for (auto& [dest, robots] : arrivals) {
    std::sort(robots.begin(), robots.end());
    order.emplace_back(robots.front(), dest);
  }
  std::sort(order.begin(), order.end());
  for (const auto& [min_robot, dest] : order)
    step_group(dest, std::move(arrivals[dest]), t);

  ++batches_;
  return !pending_.empty();
}

ExplorationRun DfsSimulator::take_run() && {
  if (!pending_.empty()) throw std::logic_error("take_run before simulation finished");

  ExplorationRun run;
  run.params = params_;
  run.translation_dir = translation_dir_;
  run.trajectories = std::move(trajectories_);
  run.traversals = std::move(traversals_);

  run.total_time = 0.0;
  for (const auto& [robots, t] : parked_) run.total_time = std::max(run.total_time, t);

  std::vector<double> first_arrival(tree_.vertex_count(),
                                    std::numeric_limits<double>::infinity());
  first_arrival[tree_.root()] = 0.0;
  for (const Traversal& tr : run.traversals)
    first_arrival[tr.to] = std::min(first_arrival[tr.to], tr.arrive);
  run.last_leaf_time = 0.0;
  for (VertexId v = 0; v < tree_.vertex_count(); ++v)
    if (tree_.vertex(v).is_leaf())
      run.last_leaf_time = std::max(run.last_leaf_time, first_arrival[v]);

  const BackboneDecomposition decomp = tree_.decompose();
  run.max_depth = decomp.max_depth;
  run.total_edge_length = tree_.total_edge_length();
  run.cell_count = tree_.real_vertex_count();
  run.tree = std::move(tree_);
  return run;
}

std::string DfsSimulator::save_state() const {
  nlohmann::json j;
  j["format"] = "roix-sim-v1";
  j["robot_count"] = params_.robot_count;
  j["robot_speed"] = params_.robot_speed;
  j["roi_speed"] = params_.roi_speed;
  j["translation_dir"] = direction_name(translation_dir_);
  j["tree"] = nlohmann::json::parse(tree_.serialize());
  j["events"] = events_;
  j["batches"] = batches_;

  std::vector<InFlight> pending = pending_;
  std::sort(pending.begin(), pending.end(), [](const InFlight& a, const InFlight& b) {
    if (a.arrive != b.arrive) return a.arrive < b.arrive;
    return a.robots.front() < b.robots.front();
  });
  auto& jp = j["pending"] = nlohmann::json::array();
  for (const InFlight& e : pending)
    jp.push_back({{"arrive", e.arrive}, {"dest", e.dest}, {"robots", e.robots}});

  auto& jk = j["parked"] = nlohmann::json::array();
  for (const auto& [robots, t] : parked_) jk.push_back({{"robots", robots}, {"time", t}});

  auto& jt = j["trajectories"] = nlohmann::json::array();
  for (const auto& traj : trajectories_) {
    nlohmann::json steps = nlohmann::json::array();
    for (const auto& [v, t] : traj) steps.push_back({v, t});
    jt.push_back(std::move(steps));
  }

  auto& jr = j["traversals"] = nlohmann::json::array();
  for (const Traversal& tr : traversals_)
    jr.push_back({{"depart", tr.depart},
                  {"arrive", tr.arrive},
                  {"from", tr.from},
                  {"to", tr.to},
                  {"robots", tr.robots}});
  return j.dump();
}

DfsSimulator DfsSimulator::restore(const std::string& json_text, SenseFn sense) {
  nlohmann::json j = nlohmann::json::parse(json_text);
  if (!j.contains("format") || j["format"] != "roix-sim-v1")
    throw std::runtime_error("unrecognized simulator document format");

  DfsSimulator sim(std::move(sense));
  sim.params_.robot_count = j.at("robot_count").get<int>();
  sim.params_.robot_speed = j.at("robot_speed").get<double>();
  sim.params_.roi_speed = j.at("roi_speed").get<double>();
  sim.translation_dir_ = direction_from_name(j.at("translation_dir").get<std::string>());
  sim.tree_ = ExplorationTree::deserialize(j.at("tree").dump());
  sim.events_ = j.at("events").get<long>();
  sim.batches_ = j.at("batches").get<int>();

  for (const auto& je : j.at("pending")) {
    InFlight e;
    e.arrive = je.at("arrive").get<double>();
    e.dest = je.at("dest").get<VertexId>();
    e.robots = je.at("robots").get<std::vector<int>>();
    sim.pending_.push_back(std::move(e));
  }
  std::make_heap(sim.pending_.begin(), sim.pending_.end(), ArriveLater{});

  for (const auto& jk : j.at("parked"))
    sim.parked_.emplace_back(jk.at("robots").get<std::vector<int>>(),
                             jk.at("time").get<double>());

  for (const auto& jt : j.at("trajectories")) {
    std::vector<std::pair<VertexId, double>> traj;
    for (const auto& step : jt)
      traj.emplace_back(step.at(0).get<VertexId>(), step.at(1).get<double>());
    sim.trajectories_.push_back(std::move(traj));
  }
  if (static_cast<int>(sim.trajectories_.size()) != sim.params_.robot_count)
    throw std::runtime_error("simulator document trajectory count mismatch");

  for (const auto& jr : j.at("traversals")) {
    Traversal tr;
    tr.depart = jr.at("depart").get<double>();
    tr.arrive = jr.at("arrive").get<double>();
    tr.from = jr.at("from").get<VertexId>();
    tr.to = jr.at("to").get<VertexId>();
    tr.robots = jr.at("robots").get<std::vector<int>>();
    sim.traversals_.push_back(std::move(tr));
  }
  return sim;
}

ExplorationRun explore(const GridRoi& world, const ExploreParams& params) {
  DfsSimulator sim(
      world.start_cell(), params, world.translation_dir(),
      [&world](Cell c) { return sense_neighbors(c, world); });
  while (sim.advance()) {
  }
  ExplorationRun run = std::move(sim).take_run();

  // Perfect sensing must cover the whole ROI: every cell one explored vertex.
  if (run.cell_count != world.cell_count() || !run.tree.all_explored())
    throw std::logic_error("explore terminated without full coverage");
  return run;
}

SweepDetection find_roi_sweep(const BoundingBox& box, Cell start,
                              double robot_speed, const GridRoi& roi) {
  if (robot_speed <= 0.0) throw std::invalid_argument("robot_speed must be > 0");
  if (box.hi.x < box.lo.x || box.hi.y < box.lo.y)
    throw std::invalid_argument("empty bounding box");

  double elapsed = 0.0;
  Cell cur = start;
  if (roi.contains(cur)) return {cur, 0.0};

  // Transit to the box's SW corner, then zigzag rows northward.
  const Cell corner = box.lo;
  if (cur != corner) {
    const double dx = corner.x - cur.x;
    const double dy = corner.y - cur.y;
    elapsed += std::sqrt(dx * dx + dy * dy) / robot_speed;
    cur = corner;
    if (roi.contains(cur)) return {cur, elapsed};
  }

  bool eastbound = true;
  for (int y = box.lo.y; y <= box.hi.y; ++y, eastbound = !eastbound) {
    const int x0 = eastbound ? box.lo.x : box.hi.x;
    const int x1 = eastbound ? box.hi.x : box.lo.x;
    const int step = eastbound ? 1 : -1;
    for (int x = x0;; x += step) {
      const Cell c{x, y};
      if (c != cur) {
        elapsed += (std::abs(c.x - cur.x) + std::abs(c.y - cur.y)) / robot_speed;
        cur = c;
        if (roi.contains(cur)) return {cur, elapsed};
      }
      if (x == x1) break;
    }
  }
  throw std::runtime_error("sweep exhausted bounding box without ROI detection");
}

}  // namespace roix
