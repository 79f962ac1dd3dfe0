#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "roix/grid_world.hpp"

namespace roix {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

/// An arbitrary-shape ROI boundary in sensor-footprint units: one simple
/// counterclockwise outer ring plus optional clockwise hole rings. make()
/// normalizes orientation and rejects degenerate or self-intersecting input.
class FatPolygon {
 public:
  static FatPolygon make(std::vector<Vec2> outer,
                         std::vector<std::vector<Vec2>> holes = {});

  const std::vector<Vec2>& outer() const { return outer_; }
  const std::vector<std::vector<Vec2>>& holes() const { return holes_; }
  void bounding_box(Vec2& lo, Vec2& hi) const;
  FatPolygon translated(double dx, double dy) const;

 private:
  FatPolygon() = default;
  std::vector<Vec2> outer_;
  std::vector<std::vector<Vec2>> holes_;
};

double ring_signed_area(const std::vector<Vec2>& ring);

/// Point containment against the full boundary set (outer ring and holes,
/// via crossing parity), with an explicit boundary band so closed and open
/// variants are distinguishable in floating point.
class PolygonProbe {
 public:
  explicit PolygonProbe(const FatPolygon& poly);

  bool contains_closed(Vec2 p) const;  // interior or boundary
  bool contains_open(Vec2 p) const;    // strict interior
  bool on_boundary(Vec2 p, double eps = 1e-9) const;

 private:
  struct Edge {
    Vec2 a, b;
  };
  bool parity_inside(Vec2 p) const;

  std::vector<Edge> edges_;
  std::vector<std::vector<int>> buckets_;  // edge ids by y band
  double y0_ = 0.0;
  double bucket_h_ = 0.5;
};

/// Sampled test of the inscribed-ball condition: at every boundary sample the
/// open ball of radius sqrt(2)/2, centered sqrt(2)/2 along the inward normal,
/// must lie inside the interior. The ball boundary is probed at 32 points at
/// radius sqrt(2)/2 - tolerance plus a center check.
bool is_fat(const FatPolygon& poly, int boundary_samples = 3,
            double tolerance = 1e-6);

struct GridApproximation {
  Vec2 origin_offset{0.0, 0.0};
  std::vector<Cell> inner_cells;  // closure contained in the shape, hole-free
  std::vector<Cell> outer_cells;  // positive-area overlap with the shape
};

/// Inner/outer grid approximation on the unit grid shifted by origin_offset
/// (components in [0,1)). Inner membership is the sampled corner+center
/// closure test; outer membership is exact positive-area polygon/cell overlap.
GridApproximation rasterize(const FatPolygon& poly, Vec2 origin_offset);

/// Brute-force search over axis-aligned grid offsets in [0,1)^2 at the given
/// resolution for the grid with the fewest inner cells (at least one).
/// Returns that approximation and its inner count, an upper estimate of the
/// true best since rotations are not searched.
std::pair<GridApproximation, int> best_inner_grid(const FatPolygon& poly,
                                                  double resolution = 0.05);

struct ApproximationReport {
  bool outer_bound_ok = false;  // C_out <= 3 C_in + 6
  bool best_bound_ok = false;  // C_in(offset 0) <= 6 C_best
  int c_out = 0;
  int c_in = 0;
  int c_best = 0;
};

/// Rasterizes at offset (0,0), runs the best-grid search at resolution 0.05,
/// and checks both grid-approximation inequalities. Requires a fat polygon.
ApproximationReport verify_approximation_bounds(const FatPolygon& poly);

/// Random fat shape for property sweeps: a union of one to four overlapping
/// disks of radius >= 1.5, polygonalized by marching squares and re-validated
/// with is_fat before being returned.
FatPolygon random_fat_shape(uint64_t seed);

/// Polygon file round-trip (JSON text, units = footprint side lengths).
std::string save_polygon(const FatPolygon& poly);
FatPolygon load_polygon(const std::string& json_text);

}  // namespace roix
