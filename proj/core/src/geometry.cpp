#include "roix/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>

#include <json.hpp>

#include "roix/rng.hpp"

namespace roix {

namespace {

constexpr double kAreaTol = 1e-9;
constexpr double kHalfSqrt2 = std::numbers::sqrt2 / 2.0;

double dist_point_segment(Vec2 p, Vec2 a, Vec2 b) {
  const double abx = b.x - a.x, aby = b.y - a.y;
  const double len2 = abx * abx + aby * aby;
  double t = 0.0;
  if (len2 > 0.0) t = std::clamp(((p.x - a.x) * abx + (p.y - a.y) * aby) / len2, 0.0, 1.0);
  const double dx = p.x - (a.x + t * abx);
  const double dy = p.y - (a.y + t * aby);
  return std::sqrt(dx * dx + dy * dy);
}

int orient_sign(Vec2 a, Vec2 b, Vec2 c) {
  const double v = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
  if (v > 1e-12) return 1;
  if (v < -1e-12) return -1;
  return 0;
}

bool segments_properly_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  const int o1 = orient_sign(a, b, c);
  const int o2 = orient_sign(a, b, d);
  const int o3 = orient_sign(c, d, a);
  const int o4 = orient_sign(c, d, b);
  return o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0 && o1 != o2 && o3 != o4;
}

std::vector<Vec2> clean_ring(std::vector<Vec2> ring) {
  // Drop the explicit closing vertex and consecutive duplicates.
  if (ring.size() > 1 && std::abs(ring.front().x - ring.back().x) < 1e-12 &&
      std::abs(ring.front().y - ring.back().y) < 1e-12)
    ring.pop_back();
  std::vector<Vec2> out;
  for (const Vec2& v : ring) {
    if (!out.empty() && std::abs(v.x - out.back().x) < 1e-12 &&
        std::abs(v.y - out.back().y) < 1e-12)
      continue;
    out.push_back(v);
  }
  return out;
}

void check_ring_simple(const std::vector<Vec2>& ring) {
  const std::size_t n = ring.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = ring[i], b = ring[(i + 1) % n];
    for (std::size_t j = i + 1; j < n; ++j) {
      if ((j + 1) % n == i || (i + 1) % n == j) continue;  // adjacent edges
      const Vec2 c = ring[j], d = ring[(j + 1) % n];
      if (std::max(a.x, b.x) < std::min(c.x, d.x) ||
          std::max(c.x, d.x) < std::min(a.x, b.x) ||
          std::max(a.y, b.y) < std::min(c.y, d.y) ||
          std::max(c.y, d.y) < std::min(a.y, b.y))
        continue;
      if (segments_properly_intersect(a, b, c, d))
        throw std::invalid_argument("polygon ring is self-intersecting");
    }
  }
}

// Sutherland-Hodgman clip of a ring against an axis-aligned rectangle;
// returns the unsigned area of the intersection. Degenerate seams the clipper
// can introduce on concave rings have zero area and do not disturb it.
double clipped_area(const std::vector<Vec2>& ring, double x0, double y0, double x1,
                    double y1) {
  std::vector<Vec2> poly = ring;
  auto clip = [&poly](auto inside, auto intersect) {
    std::vector<Vec2> out;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2 cur = poly[i];
      const Vec2 prev = poly[(i + n - 1) % n];
      const bool cur_in = inside(cur), prev_in = inside(prev);
      if (cur_in) {
        if (!prev_in) out.push_back(intersect(prev, cur));
        out.push_back(cur);
      } else if (prev_in) {
        out.push_back(intersect(prev, cur));
      }
    }
    poly = std::move(out);
  };
  auto lerp_x = [](Vec2 a, Vec2 b, double x) {
    const double t = (x - a.x) / (b.x - a.x);
    return Vec2{x, a.y + t * (b.y - a.y)};
  };
  auto lerp_y = [](Vec2 a, Vec2 b, double y) {
    const double t = (y - a.y) / (b.y - a.y);
    return Vec2{a.x + t * (b.x - a.x), y};
  };
  clip([x0](Vec2 p) { return p.x >= x0; },
       [&](Vec2 a, Vec2 b) { return lerp_x(a, b, x0); });
  if (poly.empty()) return 0.0;
  clip([x1](Vec2 p) { return p.x <= x1; },
       [&](Vec2 a, Vec2 b) { return lerp_x(a, b, x1); });
  if (poly.empty()) return 0.0;
  clip([y0](Vec2 p) { return p.y >= y0; },
       [&](Vec2 a, Vec2 b) { return lerp_y(a, b, y0); });
  if (poly.empty()) return 0.0;
  clip([y1](Vec2 p) { return p.y <= y1; },
       [&](Vec2 a, Vec2 b) { return lerp_y(a, b, y1); });
  return std::abs(ring_signed_area(poly));
}

}  // namespace

double ring_signed_area(const std::vector<Vec2>& ring) {
  double a = 0.0;
  const std::size_t n = ring.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& p = ring[i];
    const Vec2& q = ring[(i + 1) % n];
    a += p.x * q.y - q.x * p.y;
  }
  return 0.5 * a;
}

FatPolygon FatPolygon::make(std::vector<Vec2> outer,
                            std::vector<std::vector<Vec2>> holes) {
  FatPolygon poly;
  poly.outer_ = clean_ring(std::move(outer));
  if (poly.outer_.size() < 3)
    throw std::invalid_argument("outer boundary needs at least three distinct vertices");
  const double area = ring_signed_area(poly.outer_);
  if (std::abs(area) < kAreaTol)
    throw std::invalid_argument("degenerate polygon: zero area");
  if (area < 0.0) std::reverse(poly.outer_.begin(), poly.outer_.end());
  check_ring_simple(poly.outer_);

  for (auto& h : holes) {
    std::vector<Vec2> ring = clean_ring(std::move(h));
    if (ring.size() < 3) throw std::invalid_argument("degenerate hole ring");
    const double ha = ring_signed_area(ring);
    if (std::abs(ha) < kAreaTol) throw std::invalid_argument("degenerate hole: zero area");
    if (ha > 0.0) std::reverse(ring.begin(), ring.end());  // holes run clockwise
    check_ring_simple(ring);
    poly.holes_.push_back(std::move(ring));
  }

  if (!poly.holes_.empty()) {
    FatPolygon shell;
    shell.outer_ = poly.outer_;
    const PolygonProbe outer_probe(shell);
    for (std::size_t i = 0; i < poly.holes_.size(); ++i) {
      for (const Vec2& v : poly.holes_[i])
        if (!outer_probe.contains_open(v))
          throw std::invalid_argument("hole not strictly inside the outer boundary");
      for (std::size_t j = i + 1; j < poly.holes_.size(); ++j) {
        const auto& hi_ring = poly.holes_[i];
        const auto& hj_ring = poly.holes_[j];
        for (std::size_t a = 0; a < hi_ring.size(); ++a)
          for (std::size_t b = 0; b < hj_ring.size(); ++b)
            if (segments_properly_intersect(hi_ring[a], hi_ring[(a + 1) % hi_ring.size()],
                                            hj_ring[b], hj_ring[(b + 1) % hj_ring.size()]))
              throw std::invalid_argument("holes intersect each other");
      }
    }
  }
  return poly;
}

void FatPolygon::bounding_box(Vec2& lo, Vec2& hi) const {
  lo = hi = outer_.front();
  for (const Vec2& v : outer_) {
    lo.x = std::min(lo.x, v.x);
    lo.y = std::min(lo.y, v.y);
    hi.x = std::max(hi.x, v.x);
    hi.y = std::max(hi.y, v.y);
  }
}

FatPolygon FatPolygon::translated(double dx, double dy) const {
  FatPolygon p = *this;
  for (Vec2& v : p.outer_) {
    v.x += dx;
    v.y += dy;
  }
  for (auto& ring : p.holes_)
    for (Vec2& v : ring) {
      v.x += dx;
      v.y += dy;
    }
  return p;
}

PolygonProbe::PolygonProbe(const FatPolygon& poly) {
  auto add_ring = [this](const std::vector<Vec2>& ring) {
    const std::size_t n = ring.size();
    for (std::size_t i = 0; i < n; ++i)
      edges_.push_back({ring[i], ring[(i + 1) % n]});
  };
  if (!poly.outer().empty()) add_ring(poly.outer());
  for (const auto& h : poly.holes()) add_ring(h);
  if (edges_.empty()) return;

  double ymin = edges_[0].a.y, ymax = edges_[0].a.y;
  for (const Edge& e : edges_) {
    ymin = std::min({ymin, e.a.y, e.b.y});
    ymax = std::max({ymax, e.a.y, e.b.y});
  }
  y0_ = ymin - bucket_h_;
  const int nb = static_cast<int>((ymax - y0_) / bucket_h_) + 2;
  buckets_.assign(nb, {});
  for (int i = 0; i < static_cast<int>(edges_.size()); ++i) {
    const Edge& e = edges_[i];
    const double lo = std::min(e.a.y, e.b.y), hi = std::max(e.a.y, e.b.y);
    int b0 = std::max(0, static_cast<int>((lo - y0_) / bucket_h_));
    int b1 = std::min(nb - 1, static_cast<int>((hi - y0_) / bucket_h_) + 1);
    for (int b = b0; b <= b1; ++b) buckets_[b].push_back(i);
  }
}

bool PolygonProbe::parity_inside(Vec2 p) const {
  if (buckets_.empty()) return false;
  const int b = static_cast<int>((p.y - y0_) / bucket_h_);
  if (b < 0 || b >= static_cast<int>(buckets_.size())) return false;
  int crossings = 0;
  for (int i : buckets_[b]) {
    const Edge& e = edges_[i];
    if ((e.a.y > p.y) == (e.b.y > p.y)) continue;
    const double x_int = e.a.x + (p.y - e.a.y) * (e.b.x - e.a.x) / (e.b.y - e.a.y);
    if (x_int > p.x) ++crossings;
  }
  return (crossings & 1) != 0;
}

bool PolygonProbe::on_boundary(Vec2 p, double eps) const {
  if (buckets_.empty()) return false;
  const int bc = static_cast<int>((p.y - y0_) / bucket_h_);
  for (int b = bc - 1; b <= bc + 1; ++b) {
    if (b < 0 || b >= static_cast<int>(buckets_.size())) continue;
    for (int i : buckets_[b]) {
      const Edge& e = edges_[i];
      if (p.x < std::min(e.a.x, e.b.x) - eps || p.x > std::max(e.a.x, e.b.x) + eps ||
          p.y < std::min(e.a.y, e.b.y) - eps || p.y > std::max(e.a.y, e.b.y) + eps)
        continue;
      if (dist_point_segment(p, e.a, e.b) <= eps) return true;
    }
  }
  return false;
}

bool PolygonProbe::contains_closed(Vec2 p) const {
  return on_boundary(p) || parity_inside(p);
}

bool PolygonProbe::contains_open(Vec2 p) const {
  return !on_boundary(p) && parity_inside(p);
}

bool is_fat(const FatPolygon& poly, int boundary_samples, double tolerance) {
  if (boundary_samples < 1) throw std::invalid_argument("boundary_samples must be >= 1");
  const PolygonProbe probe(poly);
  const double test_radius = kHalfSqrt2 - tolerance;

  auto ring_ok = [&](const std::vector<Vec2>& ring) {
    const std::size_t n = ring.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2 a = ring[i], b = ring[(i + 1) % n];
      const double ex = b.x - a.x, ey = b.y - a.y;
      const double len = std::sqrt(ex * ex + ey * ey);
      if (len < 1e-12) continue;
      // Interior lies to the left of travel for outer (ccw) and hole (cw) rings alike.
      const double nx = -ey / len, ny = ex / len;
      const int count = std::max(1, static_cast<int>(std::ceil(len * boundary_samples)));
      for (int k = 0; k < count; ++k) {
        const double t = (k + 0.5) / count;
        const Vec2 c{a.x + t * ex + kHalfSqrt2 * nx, a.y + t * ey + kHalfSqrt2 * ny};
        if (!probe.contains_open(c)) return false;
        for (int s = 0; s < 32; ++s) {
          const double ang = 2.0 * std::numbers::pi * s / 32.0;
          const Vec2 q{c.x + test_radius * std::cos(ang),
                       c.y + test_radius * std::sin(ang)};
          if (!probe.contains_closed(q)) return false;
        }
      }
    }
    return true;
  };

  if (!ring_ok(poly.outer())) return false;
  for (const auto& h : poly.holes())
    if (!ring_ok(h)) return false;
  return true;
}

namespace {

// Positive-area overlap between the shape and the cell [x0,x1]x[y0,y1].
double cell_overlap_area(const FatPolygon& poly, double x0, double y0, double x1,
                         double y1) {
  double area = clipped_area(poly.outer(), x0, y0, x1, y1);
  if (area <= kAreaTol) return 0.0;
  for (const auto& h : poly.holes()) area -= clipped_area(h, x0, y0, x1, y1);
  return area;
}

bool cell_is_inner(const FatPolygon& poly, const PolygonProbe& probe, double x0,
                   double y0) {
  const Vec2 samples[5] = {{x0, y0},
                           {x0 + 1.0, y0},
                           {x0 + 1.0, y0 + 1.0},
                           {x0, y0 + 1.0},
                           {x0 + 0.5, y0 + 0.5}};
  for (const Vec2& s : samples)
    if (!probe.contains_closed(s)) return false;
  for (const auto& h : poly.holes()) {
    double hx0 = h[0].x, hx1 = h[0].x, hy0 = h[0].y, hy1 = h[0].y;
    for (const Vec2& v : h) {
      hx0 = std::min(hx0, v.x);
      hx1 = std::max(hx1, v.x);
      hy0 = std::min(hy0, v.y);
      hy1 = std::max(hy1, v.y);
    }
    if (hx1 < x0 || hx0 > x0 + 1.0 || hy1 < y0 || hy0 > y0 + 1.0) continue;
    if (clipped_area(h, x0, y0, x0 + 1.0, y0 + 1.0) > kAreaTol) return false;
  }
  return true;
}

}  // namespace

GridApproximation rasterize(const FatPolygon& poly, Vec2 origin_offset) {
  GridApproximation ga;
  ga.origin_offset = origin_offset;
  const PolygonProbe probe(poly);

  Vec2 lo, hi;
  poly.bounding_box(lo, hi);
  const int i0 = static_cast<int>(std::floor(lo.x - origin_offset.x)) - 1;
  const int i1 = static_cast<int>(std::ceil(hi.x - origin_offset.x)) + 1;
  const int j0 = static_cast<int>(std::floor(lo.y - origin_offset.y)) - 1;
  const int j1 = static_cast<int>(std::ceil(hi.y - origin_offset.y)) + 1;

  for (int j = j0; j <= j1; ++j) {
    for (int i = i0; i <= i1; ++i) {
      const double x0 = origin_offset.x + i;
      const double y0 = origin_offset.y + j;
      if (cell_overlap_area(poly, x0, y0, x0 + 1.0, y0 + 1.0) <= kAreaTol) continue;
      ga.outer_cells.push_back({i, j});
      if (cell_is_inner(poly, probe, x0, y0)) ga.inner_cells.push_back({i, j});
    }
  }
  return ga;
}

std::pair<GridApproximation, int> best_inner_grid(const FatPolygon& poly,
                                                  double resolution) {
  if (!(resolution > 0.0) || resolution > 0.1)
    throw std::invalid_argument("resolution must lie in (0, 0.1]");
  const int steps = static_cast<int>(std::round(1.0 / resolution));
  const PolygonProbe probe(poly);

  Vec2 lo, hi;
  poly.bounding_box(lo, hi);
  const int i0 = static_cast<int>(std::floor(lo.x)) - 2;
  const int i1 = static_cast<int>(std::ceil(hi.x)) + 2;
  const int j0 = static_cast<int>(std::floor(lo.y)) - 2;
  const int j1 = static_cast<int>(std::ceil(hi.y)) + 2;

  int best_count = std::numeric_limits<int>::max();
  Vec2 best_offset{0.0, 0.0};
  for (int sy = 0; sy < steps; ++sy) {
    for (int sx = 0; sx < steps; ++sx) {
      const Vec2 off{sx * resolution, sy * resolution};
      int count = 0;
      for (int j = j0; j <= j1 && count < best_count; ++j)
        for (int i = i0; i <= i1 && count < best_count; ++i)
          if (cell_is_inner(poly, probe, off.x + i, off.y + j)) ++count;
      if (count >= 1 && count < best_count) {
        best_count = count;
        best_offset = off;
      }
    }
  }
  if (best_count == std::numeric_limits<int>::max())
    throw std::runtime_error(
        "best_inner_grid: no offset yields an inner cell (shape too thin?)");
  return {rasterize(poly, best_offset), best_count};
}

ApproximationReport verify_approximation_bounds(const FatPolygon& poly) {
  // Fatness is the caller's precondition: the inequalities are only guaranteed
  // for fat shapes, but polygonal anchors (squares, inflated strips) whose
  // corners fail the strict sampled ball test are still useful rasterization
  // checks, so no gate here.
  const GridApproximation ga = rasterize(poly, {0.0, 0.0});
  const auto [best, c_best] = best_inner_grid(poly, 0.05);

  ApproximationReport r;
  r.c_out = static_cast<int>(ga.outer_cells.size());
  r.c_in = static_cast<int>(ga.inner_cells.size());
  r.c_best = c_best;
  r.outer_bound_ok = r.c_out <= 3 * r.c_in + 6;
  r.best_bound_ok = r.c_in <= 6 * r.c_best;
  return r;
}

namespace {

struct Disk {
  Vec2 center;
  double radius;
};

// Marching squares over the union's signed distance min_i(|p - c_i| - r_i);
// returns the stitched zero-level loops.
std::vector<std::vector<Vec2>> union_boundary_loops(const std::vector<Disk>& disks,
                                                    double res) {
  Vec2 lo = disks[0].center, hi = lo;
  for (const Disk& d : disks) {
    lo.x = std::min(lo.x, d.center.x - d.radius);
    lo.y = std::min(lo.y, d.center.y - d.radius);
    hi.x = std::max(hi.x, d.center.x + d.radius);
    hi.y = std::max(hi.y, d.center.y + d.radius);
  }
  // A tiny shift keeps field zeros off the sample lattice.
  const double x0 = lo.x - 0.5 + 1.2345e-7;
  const double y0 = lo.y - 0.5 + 1.2345e-7;
  const int nx = static_cast<int>((hi.x - lo.x + 1.0) / res) + 2;
  const int ny = static_cast<int>((hi.y - lo.y + 1.0) / res) + 2;

  auto field = [&](double x, double y) {
    double f = std::numeric_limits<double>::infinity();
    for (const Disk& d : disks) {
      const double dx = x - d.center.x, dy = y - d.center.y;
      f = std::min(f, std::sqrt(dx * dx + dy * dy) - d.radius);
    }
    return f;
  };

  std::vector<double> grid(static_cast<std::size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      grid[static_cast<std::size_t>(j) * nx + i] = field(x0 + i * res, y0 + j * res);

  auto key = [](Vec2 p) {
    return std::pair<long long, long long>(std::llround(p.x * 1e7),
                                           std::llround(p.y * 1e7));
  };
  std::map<std::pair<long long, long long>, std::vector<int>> at_point;
  std::vector<std::pair<Vec2, Vec2>> segments;
  auto add_segment = [&](Vec2 a, Vec2 b) {
    const int id = static_cast<int>(segments.size());
    segments.emplace_back(a, b);
    at_point[key(a)].push_back(id);
    at_point[key(b)].push_back(id);
  };

  for (int j = 0; j + 1 < ny; ++j) {
    for (int i = 0; i + 1 < nx; ++i) {
      const double fa = grid[static_cast<std::size_t>(j) * nx + i];
      const double fb = grid[static_cast<std::size_t>(j) * nx + i + 1];
      const double fc = grid[static_cast<std::size_t>(j + 1) * nx + i + 1];
      const double fd = grid[static_cast<std::size_t>(j + 1) * nx + i];
      const int mask =
          (fa < 0 ? 1 : 0) | (fb < 0 ? 2 : 0) | (fc < 0 ? 4 : 0) | (fd < 0 ? 8 : 0);
      if (mask == 0 || mask == 15) continue;

      const double xa = x0 + i * res, yb = y0 + j * res;
      auto lerp = [](double f0, double f1) { return f0 / (f0 - f1); };
      const Vec2 e_bottom{xa + lerp(fa, fb) * res, yb};
      const Vec2 e_right{xa + res, yb + lerp(fb, fc) * res};
      const Vec2 e_top{xa + lerp(fd, fc) * res, yb + res};
      const Vec2 e_left{xa, yb + lerp(fa, fd) * res};

      switch (mask) {
        case 1: case 14: add_segment(e_left, e_bottom); break;
        case 2: case 13: add_segment(e_bottom, e_right); break;
        case 3: case 12: add_segment(e_left, e_right); break;
        case 4: case 11: add_segment(e_right, e_top); break;
        case 6: case 9: add_segment(e_bottom, e_top); break;
        case 7: case 8: add_segment(e_top, e_left); break;
        case 5:
        case 10: {
          const bool center_in = field(xa + 0.5 * res, yb + 0.5 * res) < 0.0;
          if ((mask == 5) == center_in) {
            add_segment(e_left, e_top);
            add_segment(e_right, e_bottom);
          } else {
            add_segment(e_left, e_bottom);
            add_segment(e_right, e_top);
          }
          break;
        }
        default: break;
      }
    }
  }

  std::vector<std::vector<Vec2>> loops;
  std::vector<bool> used(segments.size(), false);
  for (int start = 0; start < static_cast<int>(segments.size()); ++start) {
    if (used[start]) continue;
    std::vector<Vec2> loop;
    used[start] = true;
    const auto start_key = key(segments[start].first);
    loop.push_back(segments[start].first);
    Vec2 cur = segments[start].second;
    bool closed = false;
    while (true) {
      if (key(cur) == start_key) {
        closed = true;
        break;
      }
      loop.push_back(cur);
      int next = -1;
      for (int id : at_point[key(cur)])
        if (!used[id]) {
          next = id;
          break;
        }
      if (next < 0) break;
      used[next] = true;
      const auto& [a, b] = segments[next];
      cur = (key(a) == key(cur)) ? b : a;
    }
    if (closed && loop.size() >= 3) loops.push_back(std::move(loop));
  }
  return loops;
}

// Marching squares emits sliver edges whose normals wobble; resampling the
// loop at even arc length keeps the sampled ball test stable.
std::vector<Vec2> resample_loop(const std::vector<Vec2>& loop, double spacing) {
  double perimeter = 0.0;
  const std::size_t n = loop.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = loop[i], b = loop[(i + 1) % n];
    perimeter += std::hypot(b.x - a.x, b.y - a.y);
  }
  const int count = std::max(8, static_cast<int>(perimeter / spacing));
  const double step = perimeter / count;

  std::vector<Vec2> out;
  out.reserve(count);
  double want = 0.0, walked = 0.0;
  for (std::size_t i = 0; i < n && static_cast<int>(out.size()) < count; ++i) {
    const Vec2 a = loop[i], b = loop[(i + 1) % n];
    const double len = std::hypot(b.x - a.x, b.y - a.y);
    while (want <= walked + len && static_cast<int>(out.size()) < count) {
      const double t = len > 0.0 ? (want - walked) / len : 0.0;
      out.push_back({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
      want += step;
    }
    walked += len;
  }
  return out;
}

}  // namespace

FatPolygon random_fat_shape(uint64_t seed) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    Rng rng(seed + 0x51ed2700ULL * attempt);
    const int disk_count = 1 + static_cast<int>(rng.next_below(4));
    std::vector<Disk> disks;
    // Radii comfortably above the fatness floor: tiny disks are fat but sit
    // in the regime where the outer/inner cell-count inequality has no slack.
    disks.push_back({{0.0, 0.0}, 2.5 + 1.0 * rng.next_double()});
    for (int k = 1; k < disk_count; ++k) {
      const Disk base = disks[rng.next_below(static_cast<uint32_t>(disks.size()))];
      const double r = 2.5 + 1.0 * rng.next_double();
      const double ang = 2.0 * std::numbers::pi * rng.next_double();
      // Strong overlap so the union keeps wide necks.
      const double d = (base.radius + r) * (0.35 + 0.35 * rng.next_double());
      disks.push_back(
          {{base.center.x + d * std::cos(ang), base.center.y + d * std::sin(ang)}, r});
    }

    auto loops = union_boundary_loops(disks, 0.1);
    std::erase_if(loops, [](const std::vector<Vec2>& l) {
      return std::abs(ring_signed_area(l)) < 1e-3;
    });
    if (loops.size() != 1) continue;  // enclosed hole or fragment: resample

    try {
      FatPolygon poly = FatPolygon::make(resample_loop(loops.front(), 0.15));
      if (is_fat(poly)) return poly;
    } catch (const std::invalid_argument&) {
      // malformed stitch; take the next attempt
    }
  }
  throw std::runtime_error("random_fat_shape failed to produce a fat polygon");
}

std::string save_polygon(const FatPolygon& poly) {
  nlohmann::json j;
  auto dump_ring = [](const std::vector<Vec2>& ring) {
    nlohmann::json jr = nlohmann::json::array();
    for (const Vec2& v : ring) jr.push_back({v.x, v.y});
    return jr;
  };
  j["outer"] = dump_ring(poly.outer());
  j["holes"] = nlohmann::json::array();
  for (const auto& h : poly.holes()) j["holes"].push_back(dump_ring(h));
  return j.dump(2);
}

FatPolygon load_polygon(const std::string& json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text);
  auto parse_ring = [](const nlohmann::json& jr) {
    std::vector<Vec2> ring;
    for (const auto& jv : jr)
      ring.push_back({jv.at(0).get<double>(), jv.at(1).get<double>()});
    return ring;
  };
  std::vector<std::vector<Vec2>> holes;
  if (j.contains("holes"))
    for (const auto& jh : j["holes"]) holes.push_back(parse_ring(jh));
  return FatPolygon::make(parse_ring(j.at("outer")), std::move(holes));
}

}  // namespace roix
