#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "roix/analysis.hpp"
#include "roix/dfs_explorer.hpp"
#include "roix/grid_world.hpp"
#include "roix/harness.hpp"
#include "roix/rng.hpp"

using namespace roix;

namespace {

GridRoi strip(int k) {
  std::vector<Cell> cells;
  for (int x = 0; x < k; ++x) cells.push_back({x, 0});
  return GridRoi::from_cells(cells, Direction::North, 0.0, {0, 0});
}

}  // namespace

TEST_CASE("log2_floor follows the splitting depth") {
  CHECK(log2_floor(1) == 0);
  CHECK(log2_floor(2) == 1);
  CHECK(log2_floor(3) == 1);
  CHECK(log2_floor(4) == 2);
  CHECK(log2_floor(20) == 4);
  CHECK(log2_floor(32) == 5);
}

TEST_CASE("upper bound closed form") {
  CHECK(upper_bound(50, 10, 1, 1.0, 0.0) == doctest::Approx(100.0));
  CHECK(upper_bound(120, 20, 20, 2.5, 1.0) == doctest::Approx(2.0 * 200.0 / 7.5));
  CHECK(upper_bound(1, 0, 4, 1.0, 0.0) == doctest::Approx(2.0 / 3.0));
  CHECK_THROWS_AS(upper_bound(10, 3, 2, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(upper_bound(10, 12, 2, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("special-case bounds") {
  const SpecialCaseBounds b = special_case_bounds(100, 30, 1, 2.0, 1.0);
  CHECK(b.srtr == doctest::Approx(200.0));
  CHECK(b.srtr_tight == doctest::Approx(400.0 / 3.0));
  // Tightening factor is robot_speed / (robot_speed + roi_speed) in (1/2, 1].
  const double factor = b.srtr_tight / b.srtr;
  CHECK(factor == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(factor > 0.5);
  CHECK(factor <= 1.0);

  const SpecialCaseBounds s = special_case_bounds(100, 30, 1, 2.0, 0.0);
  CHECK(s.srtr_tight == doctest::Approx(s.srsr));
  CHECK(s.srsr == doctest::Approx(100.0));
}

TEST_CASE("grid lower bound closed form") {
  CHECK(lower_bound_grid(1, 3, 1.0, 0.0) == 0.0);
  CHECK(lower_bound_grid(121, 4, 1.5, 0.5) == doctest::Approx(15.0));
  CHECK(lower_bound_grid(101, 1, 1.0, 0.0) == doctest::Approx(100.0));
}

TEST_CASE("competitive right sides") {
  CHECK(competitive_rhs(4.0, 1, 1.0, 0.0, RatioVariant::Grid) == doctest::Approx(10.0));
  CHECK(competitive_rhs(0.0, 2, 1.0, 0.0, RatioVariant::Grid) == doctest::Approx(1.0));
  for (double opt : {0.0, 1.0, 7.5}) {
    const double g = competitive_rhs(opt, 3, 2.0, 0.5, RatioVariant::Grid);
    const double a = competitive_rhs(opt, 3, 2.0, 0.5, RatioVariant::Arbitrary);
    CHECK(a >= g);
  }
}

TEST_CASE("bounds scale inversely with a common speed factor") {
  for (double k : {2.0, 10.0}) {
    CHECK(upper_bound(80, 15, 6, k * 2.0, k * 0.5) ==
          doctest::Approx(upper_bound(80, 15, 6, 2.0, 0.5) / k));
    CHECK(lower_bound_grid(80, 6, k * 2.0, k * 0.5) ==
          doctest::Approx(lower_bound_grid(80, 6, 2.0, 0.5) / k));
    CHECK(special_case_bounds(80, 15, 1, k * 2.0, k * 0.5).srtr_tight ==
          doctest::Approx(special_case_bounds(80, 15, 1, 2.0, 0.5).srtr_tight / k));
  }
}

TEST_CASE("brute-force oracle on hand-checkable maps") {
  SUBCASE("2x2 square: the four-cycle tour") {
    const GridRoi world = GridRoi::from_cells({{0, 0}, {1, 0}, {1, 1}, {0, 1}},
                                              Direction::North, 0.0, {0, 0});
    CHECK(brute_force_opt(world, 1, 1.0, 0.0) == doctest::Approx(4.0));
  }
  SUBCASE("three-cell strip from an end: down and back") {
    CHECK(brute_force_opt(strip(3), 1, 1.0, 0.0) == doctest::Approx(4.0));
  }
  SUBCASE("single cell") { CHECK(brute_force_opt(strip(1), 2, 1.0, 0.0) == 0.0); }
  SUBCASE("caps are enforced") {
    CHECK_THROWS_AS(brute_force_opt(generate_random_roi(9, 1), 1, 1.0, 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(brute_force_opt(strip(3), 3, 1.0, 0.0), std::invalid_argument);
  }
}

TEST_CASE("oracle respects the grid lower bound and the two-robot inequalities") {
  const auto shapes = enumerate_connected_cell_sets(5);
  for (std::size_t i = 0; i < shapes.size(); i += 3) {
    const GridRoi world =
        GridRoi::from_cells(shapes[i], Direction::East, 0.5, shapes[i].front());
    const double opt1 = brute_force_opt(world, 1, 1.5, 0.5);
    const double opt2 = brute_force_opt(world, 2, 1.5, 0.5);
    CHECK(opt1 >= lower_bound_grid(world.cell_count(), 1, 1.5, 0.5) - 1e-9);
    CHECK(opt2 >= lower_bound_grid(world.cell_count(), 2, 1.5, 0.5) - 1e-9);
    CHECK(opt2 <= opt1 + 1e-9);
    CHECK(opt1 <= 2.0 * opt2 + 1e-9);
  }
}

TEST_CASE("reward audit: single robot on a path is tight") {
  for (int k : {2, 6, 11}) {
    const ExplorationRun run = explore(strip(k), {1, 1.0, 0.0});
    const RewardAudit audit = audit_rewards(run);
    const double len = k - 1;  // pure backbone of that many unit edges
    CHECK(audit.lhs == doctest::Approx(len));
    CHECK(audit.total == doctest::Approx(len));
    CHECK(audit.rhs == doctest::Approx(len));
    CHECK(audit.ok);
  }
}

TEST_CASE("reward audit: single cell is all zeros") {
  const ExplorationRun run = explore(strip(1), {1, 1.0, 0.0});
  const RewardAudit audit = audit_rewards(run);
  CHECK(audit.lhs == 0.0);
  CHECK(audit.total == 0.0);
  CHECK(audit.rhs == 0.0);
  CHECK(audit.ok);
}

TEST_CASE("reward audit: corridor plus side leaf, single robot") {
  // The DFS takes the corridor first and reaches the east leaf last, so the
  // audit backbone is the short branch, not the deepest path.
  const GridRoi world = GridRoi::from_cells(
      {{0, 0}, {0, 1}, {0, 2}, {0, 3}, {1, 0}}, Direction::North, 0.0, {0, 0});
  const ExplorationRun run = explore(world, {1, 1.0, 0.0});
  CHECK(run.last_leaf_time == doctest::Approx(7.0));
  const RewardAudit audit = audit_rewards(run);
  CHECK(audit.backbone_length == 1);
  CHECK(audit.ok);
  CHECK(audit.lhs == doctest::Approx(7.0));
  CHECK(audit.rhs == doctest::Approx(2.0 * (4 - 1) + 1.0));
}

TEST_CASE("single-robot audits hold on every run") {
  // With one robot every tree edge is traversed exactly twice and every move
  // before the last leaf collects, so the token inequality is exact.
  for (uint64_t seed = 1; seed <= 25; ++seed) {
    const GridRoi world = generate_random_roi(30 + static_cast<int>(seed % 50), seed);
    const double roi_speed = (seed % 3 == 0) ? 0.0 : 1.0;
    const ExplorationRun run = explore(world, {1, 2.5, roi_speed});
    const RewardAudit audit = audit_rewards(run);
    CHECK(audit.ok);
  }
}

TEST_CASE("reward replay never exceeds the per-edge budgets") {
  for (uint64_t seed = 1; seed <= 30; ++seed) {
    const GridRoi world = generate_random_roi(30 + static_cast<int>(seed % 50), seed);
    const int robots = 1 + static_cast<int>(seed % 8);
    const double roi_speed = (seed % 3 == 0) ? 0.0 : 1.0;
    const ExplorationRun run = explore(world, {robots, 2.5, roi_speed});
    const RewardAudit audit = audit_rewards(run);
    CHECK(audit.total <= audit.rhs + 1e-9);
    const int streams = 1 + log2_floor(robots);
    for (const RewardEdge& e : audit.ledger) {
      if (e.kind == EdgeKind::Rib)
        CHECK(e.reward_collected <= 2.0 * e.length + 1e-12);
      else
        CHECK(e.reward_collected <= streams * e.length + 1e-12);
    }
    if (robots >= 2) CHECK(audit.rhs <= audit.rhs_max_depth + 1e-9);
  }
}

TEST_CASE("multi-robot audits hold at the experiment defaults") {
  for (uint64_t seed = 500; seed < 510; ++seed) {
    const GridRoi world = generate_random_roi(120, seed);
    const ExplorationRun run = explore(world, {20, 2.5, 1.0});
    CHECK(audit_rewards(run).ok);
  }
}

TEST_CASE("proved bounds sandwich every run") {
  for (uint64_t seed = 100; seed < 120; ++seed) {
    const GridRoi world = generate_random_roi(60, seed);
    const int robots = 1 + static_cast<int>(seed % 6);
    const ExplorationRun run = explore(world, {robots, 2.5, 1.0});
    const double ub = upper_bound(run.cell_count, run.max_depth, robots, 2.5, 1.0);
    const double lb = lower_bound_grid(run.cell_count, robots, 2.5, 1.0);
    CHECK(run.total_time <= ub + 1e-9);
    CHECK(lb <= run.total_time + 1e-9);
  }
}

TEST_CASE("lawnmower baseline sits below the run at the experiment defaults") {
  // Clairvoyant bounding-box sweeps can beat a single robot on stringy maps;
  // at the default team size the split strips stay well below the run.
  for (uint64_t seed = 200; seed < 220; ++seed) {
    const GridRoi world = generate_random_roi(120, seed);
    const ExplorationRun run = explore(world, {20, 2.5, 1.0});
    CHECK(lawnmower_lower_bound(world, 20, 2.5, 1.0) <= run.total_time + 1e-9);
  }
}

TEST_CASE("lawnmower baseline") {
  SUBCASE("one-row rectangle, one robot, static") {
    CHECK(lawnmower_lower_bound(strip(10), 1, 1.0, 0.0) == doctest::Approx(10.0));
  }
  SUBCASE("more robots than rows saturates at a single strip") {
    std::vector<Cell> cells;
    for (int x = 0; x < 6; ++x)
      for (int y = 0; y < 3; ++y) cells.push_back({x, y});
    const GridRoi rect = GridRoi::from_cells(cells, Direction::North, 0.0, {0, 0});
    const double t8 = lawnmower_lower_bound(rect, 8, 1.0, 0.0);
    const double t64 = lawnmower_lower_bound(rect, 64, 1.0, 0.0);
    CHECK(t8 == t64);
    CHECK(t8 == doctest::Approx(3.0));  // one column strip of three cells
  }
  SUBCASE("splitting monotone in robots") {
    const GridRoi world = generate_random_roi(100, 77);
    double prev = lawnmower_lower_bound(world, 1, 2.0, 1.0);
    for (int robots : {2, 4, 8}) {
      const double t = lawnmower_lower_bound(world, robots, 2.0, 1.0);
      CHECK(t <= prev + 1e-12);
      prev = t;
    }
  }
}

TEST_CASE("competitive rhs dominates the algorithm on tiny instances") {
  const auto shapes = enumerate_connected_cell_sets(4);
  for (const auto& shape : shapes) {
    const GridRoi world =
        GridRoi::from_cells(shape, Direction::North, 0.0, shape.front());
    for (int robots : {1, 2}) {
      const ExplorationRun run = explore(world, {robots, 1.0, 0.0});
      const double opt = brute_force_opt(world, robots, 1.0, 0.0);
      const double rhs = competitive_rhs(opt, robots, 1.0, 0.0, RatioVariant::Grid);
      CHECK(run.total_time <= rhs + 1e-9);
    }
  }
}
