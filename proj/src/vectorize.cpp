#include "garagemap/vectorize.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>

#include <json.hpp>

#include "garagemap/error.hpp"
#include "garagemap/parallel.hpp"

namespace garagemap {

std::string_view to_string(ElementKind kind) {
  switch (kind) {
    case ElementKind::ParkingSpace: return "ParkingSpace";
    case ElementKind::Pathway: return "Pathway";
    case ElementKind::Obstacle: return "Obstacle";
  }
  return "Obstacle";
}

ElementKind element_kind_from_string(std::string_view text) {
  if (text == "ParkingSpace") return ElementKind::ParkingSpace;
  if (text == "Pathway") return ElementKind::Pathway;
  if (text == "Obstacle") return ElementKind::Obstacle;
  throw Error("unknown element kind '" + std::string(text) + "'");
}

// ---------------------------------------------------------------------------
// Connected components: two-pass labeling with union-find.

namespace {

struct DisjointSet {
  std::vector<std::int32_t> parent;

  std::int32_t make() {
    parent.push_back(static_cast<std::int32_t>(parent.size()));
    return parent.back();
  }
  std::int32_t find(std::int32_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(std::int32_t a, std::int32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a < b) std::swap(a, b);
    parent[a] = b;
  }
};

} // namespace

LabelGrid connected_components(const BitGrid& grid, std::uint8_t target, int connectivity) {
  if (connectivity != 4 && connectivity != 8) throw Error("connectivity must be 4 or 8");
  LabelGrid lg;
  lg.width = grid.width;
  lg.height = grid.height;
  lg.connectivity = connectivity;
  lg.labels.assign(grid.bits.size(), 0);

  DisjointSet sets;
  sets.make(); // provisional label 0 stays "background"
  auto provisional = [&](int row, int col) -> std::int32_t {
    if (!grid.in_bounds(row, col)) return 0;
    return lg.labels[static_cast<std::size_t>(row) * grid.width + col];
  };

  for (int row = 0; row < grid.height; ++row) {
    for (int col = 0; col < grid.width; ++col) {
      if (grid.at(row, col) != target) continue;
      std::array<std::int32_t, 4> seen{provisional(row, col - 1), provisional(row - 1, col), 0, 0};
      if (connectivity == 8) {
        seen[2] = provisional(row - 1, col - 1);
        seen[3] = provisional(row - 1, col + 1);
      }
      std::int32_t label = 0;
      for (auto s : seen) {
        if (s == 0) continue;
        if (label == 0) label = s;
        else sets.unite(label, s);
      }
      if (label == 0) label = sets.make();
      lg.labels[static_cast<std::size_t>(row) * grid.width + col] = label;
    }
  }

  // Final ids follow the first raster-scan encounter of each root.
  std::vector<std::int32_t> final_id(sets.parent.size(), 0);
  for (auto& l : lg.labels) {
    if (l == 0) continue;
    const auto root = sets.find(l);
    if (final_id[root] == 0) final_id[root] = ++lg.count;
    l = final_id[root];
  }
  return lg;
}

// ---------------------------------------------------------------------------
// Contour tracing along pixel edges.

Polygon trace_contour(const LabelGrid& lg, int id) {
  if (id < 1 || id > lg.count) throw LookupError("component id " + std::to_string(id) + " does not exist");
  const auto first = std::find(lg.labels.begin(), lg.labels.end(), id);
  if (first == lg.labels.end()) throw LookupError("component id " + std::to_string(id) + " does not exist");
  const auto index = static_cast<int>(first - lg.labels.begin());
  const int start_x = index % lg.width;
  const int start_y = index / lg.width;

  auto inside = [&](int row, int col) {
    return row >= 0 && col >= 0 && row < lg.height && col < lg.width && lg.at(row, col) == id;
  };

  // Headings in lattice space (y down), clockwise order E, S, W, N.
  constexpr std::array<int, 4> dx{1, 0, -1, 0};
  constexpr std::array<int, 4> dy{0, 1, 0, -1};
  // The two cells ahead of a vertex for each heading: {front-left, front-right},
  // as (row offset, col offset) from the vertex at lattice (x, y).
  constexpr std::array<std::array<std::array<int, 2>, 2>, 4> ahead{{
      {{{-1, 0}, {0, 0}}},   // E: NE, SE
      {{{0, 0}, {0, -1}}},   // S: SE, SW
      {{{0, -1}, {-1, -1}}}, // W: SW, NW
      {{{-1, -1}, {-1, 0}}}, // N: NW, NE
  }};

  Polygon poly;
  int x = start_x;
  int y = start_y;
  int heading = 3; // arrive at the start corner heading north
  const std::size_t guard = lg.labels.size() * 4 + 8;
  for (std::size_t step = 0; step <= guard; ++step) {
    const auto& fl = ahead[heading][0];
    const auto& fr = ahead[heading][1];
    const bool left_in = inside(y + fl[0], x + fl[1]);
    const bool right_in = inside(y + fr[0], x + fr[1]);
    int next = heading;
    if (left_in && right_in) {
      next = (heading + 3) % 4;
    } else if (!left_in && !right_in) {
      next = (heading + 1) % 4;
    } else if (left_in && !right_in) {
      // Diagonal pinch: an 8-connected region continues through the corner.
      next = lg.connectivity == 8 ? (heading + 3) % 4 : (heading + 1) % 4;
    }
    if (step > 0 && x == start_x && y == start_y) return poly;
    if (next != heading || step == 0) poly.vertices.push_back({static_cast<double>(x), static_cast<double>(y)});
    heading = next;
    x += dx[heading];
    y += dy[heading];
  }
  throw GeometryError("contour tracing did not close");
}

// ---------------------------------------------------------------------------
// Polygon helpers.

double signed_area(const Polygon& poly) {
  const auto& v = poly.vertices;
  double twice = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto& a = v[i];
    const auto& b = v[(i + 1) % v.size()];
    twice += a.x * b.y - b.x * a.y;
  }
  return twice / 2.0;
}

PolygonMetrics polygon_metrics(const Polygon& poly) {
  const auto& v = poly.vertices;
  PolygonMetrics m;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto& a = v[i];
    const auto& b = v[(i + 1) % v.size()];
    m.perimeter += std::hypot(b.x - a.x, b.y - a.y);
  }
  m.area = std::abs(signed_area(poly));
  return m;
}

Point2 polygon_centroid(const Polygon& poly) {
  const auto& v = poly.vertices;
  if (v.empty()) return {};
  const double area = signed_area(poly);
  if (area == 0.0) {
    Point2 mean{};
    for (const auto& p : v) {
      mean.x += p.x;
      mean.y += p.y;
    }
    return {mean.x / v.size(), mean.y / v.size()};
  }
  // Shift to the first vertex to limit cancellation on far-from-origin data.
  const Point2 o = v.front();
  double cx = 0.0, cy = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point2 a{v[i].x - o.x, v[i].y - o.y};
    const Point2 b{v[(i + 1) % v.size()].x - o.x, v[(i + 1) % v.size()].y - o.y};
    const double w = a.x * b.y - b.x * a.y;
    cx += (a.x + b.x) * w;
    cy += (a.y + b.y) * w;
  }
  return {o.x + cx / (6.0 * area), o.y + cy / (6.0 * area)};
}

bool point_in_polygon(const Polygon& poly, Point2 p) {
  const auto& v = poly.vertices;
  bool inside = false;
  for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
    const Point2 a = v[j];
    const Point2 b = v[i];
    if (edge_cross(a, b, p) == 0.0 && p.x >= std::min(a.x, b.x) && p.x <= std::max(a.x, b.x) &&
        p.y >= std::min(a.y, b.y) && p.y <= std::max(a.y, b.y))
      return true;
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x_cross = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x_cross) inside = !inside;
    }
  }
  return inside;
}

// ---------------------------------------------------------------------------
// Douglas-Peucker on a closed ring.

namespace {

double segment_distance(Point2 p, Point2 a, Point2 b) {
  const double vx = b.x - a.x;
  const double vy = b.y - a.y;
  const double len2 = vx * vx + vy * vy;
  if (len2 == 0.0) return std::hypot(p.x - a.x, p.y - a.y);
  const double t = std::clamp(((p.x - a.x) * vx + (p.y - a.y) * vy) / len2, 0.0, 1.0);
  return std::hypot(p.x - (a.x + t * vx), p.y - (a.y + t * vy));
}

} // namespace

Polygon simplify_polygon(const Polygon& poly, double epsilon) {
  std::vector<Point2> v;
  v.reserve(poly.size());
  for (const auto& p : poly.vertices)
    if (v.empty() || !(v.back() == p)) v.push_back(p);
  while (v.size() > 1 && v.front() == v.back()) v.pop_back();
  const std::size_t n = v.size();
  if (n <= 3) return Polygon{v};

  // Anchors: the lexicographic minimum (always a true corner) and the vertex farthest from it.
  std::size_t a = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (v[i].x < v[a].x || (v[i].x == v[a].x && v[i].y < v[a].y)) a = i;
  std::size_t b = a;
  double far = -1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = std::hypot(v[i].x - v[a].x, v[i].y - v[a].y);
    if (d > far) {
      far = d;
      b = i;
    }
  }

  std::vector<bool> keep(n, false);
  keep[a] = keep[b] = true;
  // Work items are (start, end) cyclic index ranges.
  std::vector<std::pair<std::size_t, std::size_t>> work{{a, b}, {b, a}};
  while (!work.empty()) {
    const auto [s, e] = work.back();
    work.pop_back();
    double best = -1.0;
    std::size_t best_i = s;
    for (std::size_t i = (s + 1) % n; i != e; i = (i + 1) % n) {
      const double d = segment_distance(v[i], v[s], v[e]);
      if (d > best) {
        best = d;
        best_i = i;
      }
    }
    if (best_i != s && best > epsilon) {
      keep[best_i] = true;
      work.emplace_back(s, best_i);
      work.emplace_back(best_i, e);
    }
  }

  if (std::count(keep.begin(), keep.end(), true) < 3) {
    double best = -1.0;
    std::size_t best_i = a;
    for (std::size_t i = 0; i < n; ++i) {
      if (keep[i]) continue;
      const double d = segment_distance(v[i], v[a], v[b]);
      if (d > best) {
        best = d;
        best_i = i;
      }
    }
    keep[best_i] = true;
  }

  Polygon out;
  for (std::size_t i = 0; i < n; ++i)
    if (keep[i]) out.vertices.push_back(v[i]);
  return out;
}

// ---------------------------------------------------------------------------
// Convex hull (monotone chain).

Polygon convex_hull(std::span<const Point2> points) {
  if (points.size() < 3) throw GeometryError("convex hull needs at least 3 points");
  std::vector<Point2> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end(), [](Point2 l, Point2 r) { return l.x < r.x || (l.x == r.x && l.y < r.y); });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  std::vector<Point2> hull(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && edge_cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && edge_cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k > 0 ? k - 1 : 0);
  if (hull.size() < 3) throw GeometryError("points are collinear; hull is degenerate");
  return Polygon{std::move(hull)};
}

// ---------------------------------------------------------------------------
// Rectangle detection.

namespace {

double triangle_area2(Point2 a, Point2 b, Point2 c) { return std::abs(edge_cross(a, b, c)); }

// Largest-area quadrilateral with vertices on the convex ring, kept in ring order.
bool right_angled(const Quad& q, double tol_deg) {
  for (int i = 0; i < 4; ++i) {
    const Point2 prev = q.vertices[(i + 3) % 4], cur = q.vertices[i], next = q.vertices[(i + 1) % 4];
    const double ux = prev.x - cur.x, uy = prev.y - cur.y;
    const double vx = next.x - cur.x, vy = next.y - cur.y;
    const double angle = std::atan2(std::abs(ux * vy - uy * vx), ux * vx + uy * vy) * 180.0 / std::numbers::pi;
    if (std::abs(angle - 90.0) > tol_deg) return false;
  }
  return true;
}

std::array<std::size_t, 4> max_area_quad(const std::vector<Point2>& v) {
  const std::size_t n = v.size();
  std::array<std::size_t, 4> best_idx{0, 1, 2, 3};
  double best = -1.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = i + 2; k < n; ++k) {
      if (i == 0 && k == n - 1) continue;
      double left = -1.0, right = -1.0;
      std::size_t j_best = i + 1, l_best = (k + 1) % n;
      for (std::size_t j = i + 1; j < k; ++j) {
        const double t = triangle_area2(v[i], v[j], v[k]);
        if (t > left) {
          left = t;
          j_best = j;
        }
      }
      for (std::size_t l = k + 1; l < n + i; ++l) {
        const std::size_t lm = l % n;
        if (lm == i) break;
        const double t = triangle_area2(v[k], v[lm], v[i]);
        if (t > right) {
          right = t;
          l_best = lm;
        }
      }
      if (left + right > best) {
        best = left + right;
        best_idx = {i, j_best, k, l_best};
      }
    }
  }
  std::sort(best_idx.begin(), best_idx.end());
  return best_idx;
}

} // namespace

std::optional<Quad> detect_rectangle(const Polygon& hull, const RectangleParams& params) {
  if (hull.size() < 4) return std::nullopt;
  const PolygonMetrics metrics = polygon_metrics(hull);
  if (metrics.area < params.min_area || metrics.area > params.max_area) return std::nullopt;
  if (metrics.perimeter < params.min_perimeter || metrics.perimeter > params.max_perimeter) return std::nullopt;

  const auto idx = max_area_quad(hull.vertices);
  Quad quad;
  for (int i = 0; i < 4; ++i) quad.vertices[i] = hull.vertices[idx[i]];

  const double quad_area = std::abs(signed_area(Polygon{{quad.vertices.begin(), quad.vertices.end()}}));
  if (quad_area < params.min_coverage * metrics.area) return std::nullopt;

  if (!right_angled(quad, params.angle_tol_deg)) return std::nullopt;
  return quad;
}

// ---------------------------------------------------------------------------
// Element extraction.

namespace {

struct ComponentRef {
  std::uint8_t value = 0; // 0 = free, 1 = occupied
  int label = 0;
  std::size_t first_cell = 0;
};

Polygon lattice_to_world(const Polygon& lattice, const GridSpec& frame) {
  Polygon out;
  out.vertices.reserve(lattice.size());
  for (const auto& p : lattice.vertices) out.vertices.push_back(frame.lattice_to_world(p.x, p.y));
  return out;
}

// Centroid when it falls inside, otherwise the component cell center nearest to it.
Point2 interior_anchor(const Polygon& geometry, const std::vector<std::size_t>& cells, int width,
                       const GridSpec& frame) {
  const Point2 c = polygon_centroid(geometry);
  if (point_in_polygon(geometry, c)) return c;
  Point2 best = geometry.vertices.front();
  double best_d = std::numeric_limits<double>::infinity();
  for (const auto cell : cells) {
    const Point2 p = frame.lattice_to_world(static_cast<double>(cell % width) + 0.5,
                                            static_cast<double>(cell / width) + 0.5);
    const double d = std::hypot(p.x - c.x, p.y - c.y);
    if (d < best_d && point_in_polygon(geometry, p)) {
      best_d = d;
      best = p;
    }
  }
  return best;
}

struct Line {
  Point2 point;
  Point2 dir; // unit length
};

// Total least squares line through the points; nullopt when they do not span a direction.
std::optional<Line> fit_line(const std::vector<Point2>& pts) {
  if (pts.size() < 2) return std::nullopt;
  Point2 m{};
  for (const auto& p : pts) {
    m.x += p.x;
    m.y += p.y;
  }
  m = {m.x / static_cast<double>(pts.size()), m.y / static_cast<double>(pts.size())};
  double sxx = 0, sxy = 0, syy = 0;
  for (const auto& p : pts) {
    sxx += (p.x - m.x) * (p.x - m.x);
    sxy += (p.x - m.x) * (p.y - m.y);
    syy += (p.y - m.y) * (p.y - m.y);
  }
  if (!(sxx + syy > 0.0)) return std::nullopt;
  const double theta = 0.5 * std::atan2(2 * sxy, sxx - syy);
  return Line{m, {std::cos(theta), std::sin(theta)}};
}

std::optional<Point2> intersect(const Line& a, const Line& b) {
  const double den = a.dir.x * b.dir.y - a.dir.y * b.dir.x;
  if (std::abs(den) < 1e-9) return std::nullopt;
  const double t = ((b.point.x - a.point.x) * b.dir.y - (b.point.y - a.point.y) * b.dir.x) / den;
  return Point2{a.point.x + t * a.dir.x, a.point.y + t * a.dir.y};
}

// The hull quad sits on outer pixel corners. Sample the contour once per cell
// edge, give each sample to the nearest quad side, fit a line to the samples
// along the middle of each side and intersect neighboring lines. Two passes, the
// second assigning samples against the first pass's corners. nullopt when a
// side has too little support or a corner moves more than a few cells, which
// means the outline does not follow the quad.
std::optional<Quad> refine_corners(const Polygon& contour, const Quad& quad, double cell) {
  if (contour.size() == 4) return quad; // an axis-aligned block: the hull quad is exact
  std::vector<Point2> samples;
  const std::size_t n = contour.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = contour.vertices[i], b = contour.vertices[(i + 1) % n];
    const int steps = std::max(1, static_cast<int>(std::lround(std::hypot(b.x - a.x, b.y - a.y) / cell)));
    for (int k = 0; k < steps; ++k) {
      const double t = (k + 0.5) / steps;
      samples.push_back({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
    }
  }
  Quad current = quad;
  for (int pass = 0; pass < 2; ++pass) {
    std::array<std::vector<Point2>, 4> sides;
    for (const auto& p : samples) {
      int best = -1;
      double best_d = std::numeric_limits<double>::infinity(), best_t = 0.0;
      for (int i = 0; i < 4; ++i) {
        const Point2 a = current.vertices[i], b = current.vertices[(i + 1) % 4];
        const double len2 = (b.x - a.x) * (b.x - a.x) + (b.y - a.y) * (b.y - a.y);
        const double t = ((p.x - a.x) * (b.x - a.x) + (p.y - a.y) * (b.y - a.y)) / len2;
        const double tc = std::clamp(t, 0.0, 1.0);
        const double d = std::hypot(p.x - a.x - tc * (b.x - a.x), p.y - a.y - tc * (b.y - a.y));
        if (d < best_d) {
          best_d = d;
          best = i;
          best_t = t;
        }
      }
      if (best_t >= 0.15 && best_t <= 0.85) sides[best].push_back(p);
    }
    std::array<Line, 4> lines;
    for (int i = 0; i < 4; ++i) {
      const auto line = sides[i].size() >= 2 ? fit_line(sides[i]) : std::nullopt;
      if (!line) return std::nullopt;
      lines[i] = *line;
    }
    Quad next;
    for (int i = 0; i < 4; ++i) {
      const auto corner = intersect(lines[(i + 3) % 4], lines[i]);
      if (!corner || std::hypot(corner->x - quad.vertices[i].x, corner->y - quad.vertices[i].y) > 4.0 * cell)
        return std::nullopt;
      next.vertices[i] = *corner;
    }
    current = next;
  }
  return current;
}

} // namespace

std::vector<MapElement> extract_elements(const BitGrid& grid, const ExtractParams& params) {
  return extract_elements(grid, params, GridSpec::for_raster(grid.width, grid.height));
}

std::vector<MapElement> extract_elements(const BitGrid& grid, const ExtractParams& params,
                                         const GridSpec& frame) {
  if (grid.bits.empty()) return {};
  const LabelGrid free_labels = connected_components(grid, 0, 4);
  const LabelGrid occupied_labels = connected_components(grid, 1, 8);

  std::vector<ComponentRef> comps;
  std::vector<std::vector<std::size_t>> free_cells(free_labels.count + 1);
  std::vector<std::vector<std::size_t>> occ_cells(occupied_labels.count + 1);
  for (std::size_t i = 0; i < grid.bits.size(); ++i) {
    if (const auto l = free_labels.labels[i]; l != 0) {
      if (free_cells[l].empty()) comps.push_back({0, l, i});
      free_cells[l].push_back(i);
    } else if (const auto m = occupied_labels.labels[i]; m != 0) {
      if (occ_cells[m].empty()) comps.push_back({1, m, i});
      occ_cells[m].push_back(i);
    }
  }

  const double cell_area = frame.cell_dx * frame.cell_dy;
  std::vector<MapElement> elements(comps.size());
  parallel_for(comps.size(), params.threads, [&](std::size_t k) {
    const ComponentRef& ref = comps[k];
    MapElement& el = elements[k];
    el.id = static_cast<int>(k) + 1;
    if (ref.value == 0) {
      const Polygon outline = lattice_to_world(trace_contour(free_labels, ref.label), frame);
      el.kind = ElementKind::Pathway;
      el.geometry = simplify_polygon(outline, params.simplify_epsilon * std::min(frame.cell_dx, frame.cell_dy));
      el.anchor = interior_anchor(el.geometry, free_cells[ref.label], grid.width, frame);
      return;
    }
    el.geometry = lattice_to_world(trace_contour(occupied_labels, ref.label), frame);
    const Polygon hull = convex_hull(el.geometry.vertices);
    std::optional<Quad> quad = detect_rectangle(hull, params.rectangle);
    if (quad) {
      const auto refined = refine_corners(el.geometry, *quad, std::min(frame.cell_dx, frame.cell_dy));
      quad.reset();
      if (refined && right_angled(*refined, params.rectangle.angle_tol_deg)) {
        const double fitted = std::abs(signed_area(Polygon{{refined->vertices.begin(), refined->vertices.end()}}));
        const double cells = static_cast<double>(occ_cells[ref.label].size()) * cell_area;
        // Overlap of cells and rectangle over the larger of the two areas.
        std::size_t inside = 0;
        for (const auto cell : occ_cells[ref.label])
          inside += point_in_quad(*refined, frame.lattice_to_world(static_cast<double>(cell % grid.width) + 0.5,
                                                                   static_cast<double>(cell / grid.width) + 0.5));
        if (static_cast<double>(inside) * cell_area >= params.min_fill * std::max(fitted, cells)) quad = refined;
      }
    }
    if (quad) {
      el.kind = ElementKind::ParkingSpace;
      el.corners = quad;
      el.anchor = quad_center(*quad);
    } else {
      el.kind = ElementKind::Obstacle;
      el.anchor = interior_anchor(el.geometry, occ_cells[ref.label], grid.width, frame);
    }
  });
  return elements;
}

// ---------------------------------------------------------------------------
// JSON lines.

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json point_json(Point2 p) { return ordered_json::array({p.x, p.y}); }

Point2 point_from_json(const ordered_json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw Error("expected [x, y] coordinate pair");
  return {j[0].get<double>(), j[1].get<double>()};
}

} // namespace

std::string elements_to_jsonl(std::span<const MapElement> elements) {
  std::string out;
  for (const auto& el : elements) {
    ordered_json j;
    j["id"] = el.id;
    j["kind"] = std::string(to_string(el.kind));
    j["anchor"] = point_json(el.anchor);
    if (el.corners) {
      ordered_json corners = ordered_json::array();
      for (const auto& p : el.corners->vertices) corners.push_back(point_json(p));
      j["corners"] = std::move(corners);
    } else {
      j["corners"] = nullptr;
    }
    ordered_json poly = ordered_json::array();
    for (const auto& p : el.geometry.vertices) poly.push_back(point_json(p));
    j["polygon"] = std::move(poly);
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::vector<MapElement> elements_from_jsonl(std::string_view text) {
  std::vector<MapElement> out;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(start, end - start);
    const std::size_t offset = start;
    start = end + 1;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      const auto j = ordered_json::parse(line);
      MapElement el;
      el.id = j.at("id").get<int>();
      el.kind = element_kind_from_string(j.at("kind").get<std::string>());
      el.anchor = point_from_json(j.at("anchor"));
      const auto& corners = j.at("corners");
      if (!corners.is_null()) {
        if (!corners.is_array() || corners.size() != 4) throw Error("corners must hold 4 points");
        Quad q;
        for (int i = 0; i < 4; ++i) q.vertices[i] = point_from_json(corners[i]);
        el.corners = q;
      }
      for (const auto& p : j.at("polygon")) el.geometry.vertices.push_back(point_from_json(p));
      out.push_back(std::move(el));
    } catch (const FormatError&) {
      throw;
    } catch (const std::exception& e) {
      throw FormatError(std::string("bad element record: ") + e.what(), offset);
    }
  }
  return out;
}

} // namespace garagemap
