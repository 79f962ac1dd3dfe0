#include "roix/analysis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

namespace roix {

namespace {

constexpr double kSlack = 1e-9;

void validate_bound_params(int cell_count, int robots, double robot_speed,
                           double roi_speed) {
  if (cell_count < 1) throw std::invalid_argument("cell_count must be >= 1");
  if (robots < 1) throw std::invalid_argument("robots must be >= 1");
  if (!(roi_speed >= 0.0) || !(robot_speed > roi_speed))
    throw std::invalid_argument("need robot_speed > roi_speed >= 0");
}

}  // namespace

int log2_floor(int robots) {
  if (robots < 1) throw std::invalid_argument("robots must be >= 1");
  return std::bit_width(static_cast<unsigned>(robots)) - 1;
}

double bound_normalizer(int robots, double robot_speed, double roi_speed) {
  return (robot_speed - roi_speed) * (1 + log2_floor(robots));
}

double upper_bound(int cell_count, int max_depth, int robots, double robot_speed,
                   double roi_speed) {
  validate_bound_params(cell_count, robots, robot_speed, roi_speed);
  if (max_depth < 0 || max_depth > cell_count - 1)
    throw std::invalid_argument("max_depth must lie in [0, cell_count - 1]");
  const int lg = log2_floor(robots);
  return 2.0 * (cell_count + static_cast<double>(max_depth) * lg) /
         bound_normalizer(robots, robot_speed, roi_speed);
}

SpecialCaseBounds special_case_bounds(int cell_count, int max_depth, int robots,
                                      double robot_speed, double roi_speed) {
  validate_bound_params(cell_count, robots, robot_speed, roi_speed);
  SpecialCaseBounds b;
  b.mrsr = upper_bound(cell_count, max_depth, robots, robot_speed, 0.0);
  b.srtr = 2.0 * cell_count / (robot_speed - roi_speed);
  b.srtr_tight = 2.0 * robot_speed * cell_count /
                 ((robot_speed + roi_speed) * (robot_speed - roi_speed));
  b.srsr = 2.0 * cell_count / robot_speed;
  return b;
}

double lower_bound_grid(int cell_count, int robots, double robot_speed,
                        double roi_speed) {
  validate_bound_params(cell_count, robots, robot_speed, roi_speed);
  return (cell_count - 1.0) / ((robot_speed + roi_speed) * robots);
}

double competitive_rhs(double opt, int robots, double robot_speed, double roi_speed,
                       RatioVariant variant) {
  if (opt < 0.0) throw std::invalid_argument("opt must be >= 0");
  validate_bound_params(1, robots, robot_speed, roi_speed);
  const int lg = log2_floor(robots);
  const double m = bound_normalizer(robots, robot_speed, roi_speed);
  if (variant == RatioVariant::Grid)
    return 2.0 * (robot_speed + roi_speed) * (robots + lg) / m * opt + 2.0 / m;
  return 2.0 * (robot_speed + roi_speed) * (18.0 * robots + lg) / m * opt + 48.0 / m;
}

RewardAudit audit_rewards(const ExplorationRun& run) {
  const ExplorationTree& tree = run.tree;
  const int lg = log2_floor(run.params.robot_count);
  const int streams = 1 + lg;

  // Last leaf to be first-visited; ties to the smaller id.
  std::vector<double> first_arrival(tree.vertex_count(),
                                    std::numeric_limits<double>::infinity());
  first_arrival[tree.root()] = 0.0;
  for (const Traversal& tr : run.traversals)
    first_arrival[tr.to] = std::min(first_arrival[tr.to], tr.arrive);
  VertexId last_leaf = tree.root();
  double t_last = 0.0;
  for (VertexId v = 0; v < tree.vertex_count(); ++v) {
    if (!tree.vertex(v).is_leaf()) continue;
    if (first_arrival[v] > t_last) {
      t_last = first_arrival[v];
      last_leaf = v;
    }
  }

  const BackboneDecomposition decomp = tree.decompose_to(last_leaf);
  std::vector<bool> on_backbone(tree.vertex_count(), false);
  for (VertexId v : decomp.backbone) on_backbone[v] = true;

  RewardAudit audit;
  audit.backbone_length = decomp.backbone_length;

  struct EdgeBudget {
    int index = -1;          // into audit.ledger
    int rib_forward = 0;     // remaining collections
    int rib_backward = 0;
    int streams_left = 0;    // backbone shared streams
    bool first_forward_done = false;
  };
  std::unordered_map<VertexId, EdgeBudget> budgets;
  for (VertexId v = 0; v < tree.vertex_count(); ++v) {
    if (v == tree.root() || tree.vertex(v).edge_length == 0) continue;
    RewardEdge e;
    e.child = v;
    e.kind = on_backbone[v] ? EdgeKind::Backbone : EdgeKind::Rib;
    e.length = tree.vertex(v).edge_length;
    EdgeBudget b;
    b.index = static_cast<int>(audit.ledger.size());
    if (e.kind == EdgeKind::Rib) {
      b.rib_forward = 1;
      b.rib_backward = 1;
    } else {
      b.streams_left = streams;
    }
    audit.ledger.push_back(e);
    budgets.emplace(v, b);
  }

  std::vector<Traversal> ordered = run.traversals;
  std::sort(ordered.begin(), ordered.end(), [](const Traversal& a, const Traversal& b) {
    if (a.depart != b.depart) return a.depart < b.depart;
    if (a.arrive != b.arrive) return a.arrive < b.arrive;
    return a.robots.front() < b.robots.front();
  });

  for (const Traversal& tr : ordered) {
    VertexId child;
    bool forward;
    if (tree.vertex(tr.to).parent == tr.from) {
      child = tr.to;
      forward = true;
    } else if (tree.vertex(tr.from).parent == tr.to) {
      child = tr.from;
      forward = false;
    } else {
      throw std::logic_error("trajectory traverses a non-tree edge");
    }
    auto it = budgets.find(child);
    if (it == budgets.end()) continue;  // dummy edge, length 0
    EdgeBudget& b = it->second;
    RewardEdge& e = audit.ledger[b.index];
    const double len = e.length;

    if (e.kind == EdgeKind::Rib) {
      if (forward && b.rib_forward > 0) {
        --b.rib_forward;
        ++e.forward_collections;
        e.reward_collected += len;
      } else if (!forward && b.rib_backward > 0) {
        --b.rib_backward;
        ++e.backward_collections;
        e.reward_collected += len;
      }
    } else {
      if (forward && !b.first_forward_done) {
        b.first_forward_done = true;
        const int take =
            std::min<int>(static_cast<int>(tr.robots.size()), b.streams_left);
        b.streams_left -= take;
        e.forward_collections += take;
        e.reward_collected += take * len;
      } else if (b.streams_left > 0) {
        --b.streams_left;
        if (forward)
          ++e.forward_collections;
        else
          ++e.backward_collections;
        e.reward_collected += len;
      }
    }
  }

  for (const RewardEdge& e : audit.ledger) audit.total += e.reward_collected;

  const double relative = run.params.robot_speed - run.params.roi_speed;
  const int length_total = tree.total_edge_length();
  audit.lhs = relative * streams * t_last;
  audit.rhs = 2.0 * (length_total - decomp.backbone_length) +
              static_cast<double>(streams) * decomp.backbone_length;
  audit.rhs_max_depth =
      2.0 * (length_total - decomp.max_depth) +
      static_cast<double>(streams) * decomp.max_depth;
  audit.ok = audit.lhs <= audit.total + kSlack && audit.total <= audit.rhs + kSlack;
  return audit;
}

double brute_force_opt(const GridRoi& world, int robots, double robot_speed,
                       double roi_speed) {
  validate_bound_params(world.cell_count(), robots, robot_speed, roi_speed);
  if (world.cell_count() > 8 || robots > 2)
    throw std::invalid_argument("brute_force_opt caps: cell_count <= 8, robots <= 2");

  // Cells indexed with the start first; travel times are asymmetric when the
  // ROI translates, so the full matrix is kept.
  std::vector<Cell> cells;
  cells.push_back(world.start_cell());
  for (const Cell& c : world.cells())
    if (c != world.start_cell()) cells.push_back(c);
  const int n = static_cast<int>(cells.size());
  const int m = n - 1;
  if (m == 0) return 0.0;

  std::vector<std::vector<double>> tau(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j)
        tau[i][j] = relative_travel_time(cells[j].x - cells[i].x,
                                         cells[j].y - cells[i].y, robot_speed,
                                         roi_speed, world.translation_dir());

  // Held-Karp over the non-start cells: dp[mask][j] = cheapest start -> (visit
  // mask) ending at cell j+1.
  const int full = (1 << m) - 1;
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> dp(full + 1, std::vector<double>(m, inf));
  for (int j = 0; j < m; ++j) dp[1 << j][j] = tau[0][j + 1];
  for (int mask = 1; mask <= full; ++mask) {
    for (int j = 0; j < m; ++j) {
      if (!(mask & (1 << j)) || dp[mask][j] == inf) continue;
      for (int k = 0; k < m; ++k) {
        if (mask & (1 << k)) continue;
        const int next = mask | (1 << k);
        dp[next][k] = std::min(dp[next][k], dp[mask][j] + tau[j + 1][k + 1]);
      }
    }
  }
  std::vector<double> tour(full + 1, inf);
  tour[0] = 0.0;
  for (int mask = 1; mask <= full; ++mask)
    for (int j = 0; j < m; ++j)
      if (mask & (1 << j)) tour[mask] = std::min(tour[mask], dp[mask][j] + tau[j + 1][0]);

  if (robots == 1) return tour[full];
  double best = inf;
  for (int mask = 0; mask <= full; ++mask)
    best = std::min(best, std::max(tour[mask], tour[full ^ mask]));
  return best;
}

namespace {

// One strip swept row by row; per-cell costs alternate with the row direction
// and the cheaper direction goes first. Transit between rows is ignored,
// keeping the baseline a lower bound.
double strip_sweep(int row_len, int rows, double t_fwd, double t_bwd) {
  if (row_len <= 0 || rows <= 0) return 0.0;
  const double lo = std::min(t_fwd, t_bwd);
  const double hi = std::max(t_fwd, t_bwd);
  return row_len * (((rows + 1) / 2) * lo + (rows / 2) * hi);
}

}  // namespace

double lawnmower_lower_bound(const GridRoi& world, int robots, double robot_speed,
                             double roi_speed) {
  validate_bound_params(world.cell_count(), robots, robot_speed, roi_speed);
  Cell lo, hi;
  world.bounding_box(lo, hi);
  const int width = hi.x - lo.x + 1;
  const int height = hi.y - lo.y + 1;

  const Direction drift = world.translation_dir();
  const double t_east = traversal_time(Direction::East, robot_speed, roi_speed, drift);
  const double t_west = traversal_time(Direction::West, robot_speed, roi_speed, drift);
  const double t_north = traversal_time(Direction::North, robot_speed, roi_speed, drift);
  const double t_south = traversal_time(Direction::South, robot_speed, roi_speed, drift);

  auto best_sweep = [&](int w, int h) {
    return std::min(strip_sweep(w, h, t_east, t_west),
                    strip_sweep(h, w, t_north, t_south));
  };

  auto split_makespan = [&](bool split_rows) {
    const int n = split_rows ? height : width;
    const int base = n / robots;
    const int extra = n % robots;
    double makespan = 0.0;
    for (int i = 0; i < robots; ++i) {
      const int span = base + (i < extra ? 1 : 0);
      if (span == 0) continue;
      const double t = split_rows ? best_sweep(width, span) : best_sweep(span, height);
      makespan = std::max(makespan, t);
    }
    return makespan;
  };

  return std::min(split_makespan(true), split_makespan(false));
}

BoundsReport make_bounds_report(const ExplorationRun& run, const GridRoi& world) {
  const auto& p = run.params;
  BoundsReport r;
  r.upper = upper_bound(run.cell_count, run.max_depth, p.robot_count, p.robot_speed,
                        p.roi_speed);
  r.lower_grid = lower_bound_grid(run.cell_count, p.robot_count, p.robot_speed,
                                  p.roi_speed);
  r.lawnmower = lawnmower_lower_bound(world, p.robot_count, p.robot_speed, p.roi_speed);
  r.normalizer = bound_normalizer(p.robot_count, p.robot_speed, p.roi_speed);
  const int lg = log2_floor(p.robot_count);
  r.competitive_grid_slope =
      2.0 * (p.robot_speed + p.roi_speed) * (p.robot_count + lg) / r.normalizer;
  r.competitive_grid_offset = 2.0 / r.normalizer;
  r.special = special_case_bounds(run.cell_count, run.max_depth, p.robot_count,
                                  p.robot_speed, p.roi_speed);
  return r;
}

}  // namespace roix
