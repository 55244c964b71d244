#include "garagemap/georef.hpp"

#include <charconv>
#include <cmath>
#include <string>

#include "garagemap/error.hpp"

namespace garagemap {

GridSpec GridSpec::for_raster(int width, int height) {
  return GridSpec{{0.0, static_cast<double>(height)}, 1.0, 1.0, height, width};
}

void GridSpec::validate() const {
  if (!(cell_dx > 0.0) || !(cell_dy > 0.0)) throw ConfigError("grid cell size must be positive");
  if (rows < 1 || cols < 1) throw ConfigError("grid must have at least one row and one column");
  if (!std::isfinite(origin.x) || !std::isfinite(origin.y)) throw ConfigError("grid origin must be finite");
}

double edge_cross(Point2 a, Point2 b, Point2 p) {
  return (b.x - a.x) * (p.y - a.y) - (p.x - a.x) * (b.y - a.y);
}

bool point_in_quad(const Quad& q, Point2 p) {
  const auto& v = q.vertices;
  double twice_area = 0.0;
  for (int i = 0; i < 4; ++i) {
    const Point2 s = v[i];
    const Point2 t = v[(i + 1) % 4];
    if (s == t) throw GeometryError("quad has repeated consecutive vertices");
    twice_area += s.x * t.y - t.x * s.y;
  }
  if (twice_area == 0.0) throw GeometryError("quad has zero area");

  bool any_positive = false;
  bool any_negative = false;
  for (int i = 0; i < 4; ++i) {
    const double f = edge_cross(v[i], v[(i + 1) % 4], p);
    any_positive |= f > 0.0;
    any_negative |= f < 0.0;
  }
  return !(any_positive && any_negative);
}

Point2 quad_center(const Quad& q) {
  Point2 sum{};
  for (const auto& v : q.vertices) {
    sum.x += v.x;
    sum.y += v.y;
  }
  return {sum.x / 4.0, sum.y / 4.0};
}

AffineTransform fit_affine(std::span<const ControlPoint> pairs) {
  if (pairs.size() < 3) throw ArityError("affine fit needs at least 3 control points");

  // Centering decouples the translation term, leaving a 2x2 normal system per axis.
  const double n = static_cast<double>(pairs.size());
  Point2 pm{}, wm{};
  for (const auto& cp : pairs) {
    pm.x += cp.pixel.x;
    pm.y += cp.pixel.y;
    wm.x += cp.world.x;
    wm.y += cp.world.y;
  }
  pm = {pm.x / n, pm.y / n};
  wm = {wm.x / n, wm.y / n};

  double sxx = 0, sxy = 0, syy = 0, sxu = 0, syu = 0, sxv = 0, syv = 0;
  for (const auto& cp : pairs) {
    const double x = cp.pixel.x - pm.x;
    const double y = cp.pixel.y - pm.y;
    const double u = cp.world.x - wm.x;
    const double v = cp.world.y - wm.y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
    sxu += x * u;
    syu += y * u;
    sxv += x * v;
    syv += y * v;
  }
  const double det = sxx * syy - sxy * sxy;
  // det / trace^2 is about the ratio of the scatter's small to large principal
  // axis, so collinear sets fail even when rounding leaves one axis a little spread.
  const double trace = sxx + syy;
  if (!(det > 1e-12 * trace * trace))
    throw SingularFitError("control points are collinear; affine fit is singular");

  AffineTransform t;
  t.a = (syy * sxu - sxy * syu) / det;
  t.b = (sxx * syu - sxy * sxu) / det;
  t.c = wm.x - t.a * pm.x - t.b * pm.y;
  t.d = (syy * sxv - sxy * syv) / det;
  t.e = (sxx * syv - sxy * sxv) / det;
  t.f = wm.y - t.d * pm.x - t.e * pm.y;
  return t;
}

Point2 apply_affine(const AffineTransform& t, Point2 p) {
  return {t.a * p.x + t.b * p.y + t.c, t.d * p.x + t.e * p.y + t.f};
}

Cell world_to_cell(Point2 p, const GridSpec& g) {
  const double col = std::floor((p.x - g.origin.x) / g.cell_dx);
  const double row = std::floor((g.origin.y - p.y) / g.cell_dy);
  if (!std::isfinite(col) || !std::isfinite(row)) throw BoundsError("point is not finite", 0, 0);
  const auto r = static_cast<long long>(row);
  const auto c = static_cast<long long>(col);
  if (r < 0 || c < 0 || r >= g.rows || c >= g.cols) throw BoundsError("point lies outside the grid", r, c);
  return {static_cast<int>(r), static_cast<int>(c)};
}

Point2 cell_to_world(Cell c, const GridSpec& g) {
  if (!g.contains(c)) throw BoundsError("cell index out of range", c.row, c.col);
  return g.lattice_to_world(c.col + 0.5, c.row + 0.5);
}

namespace {

double parse_double(std::string_view field, std::string_view name, std::size_t line) {
  double value = 0.0;
  const auto* begin = field.data();
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end || !std::isfinite(value))
    throw LoadError(std::string(name), line, "non-numeric field '" + std::string(field) + "'");
  return value;
}

} // namespace

std::vector<ControlPoint> parse_control_points(std::string_view csv, std::string_view name) {
  std::vector<ControlPoint> out;
  std::size_t start = 0;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (start < csv.size()) {
    std::size_t end = csv.find('\n', start);
    if (end == std::string_view::npos) end = csv.size();
    std::string_view line = csv.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != "px,py,wx,wy") throw LoadError(std::string(name), line_no, "expected header px,py,wx,wy");
      header_seen = true;
      continue;
    }
    double v[4];
    std::size_t field_start = 0;
    for (int i = 0; i < 4; ++i) {
      const std::size_t comma = line.find(',', field_start);
      if ((i < 3) == (comma == std::string_view::npos))
        throw LoadError(std::string(name), line_no, "expected 4 fields");
      const std::size_t field_end = i < 3 ? comma : line.size();
      v[i] = parse_double(line.substr(field_start, field_end - field_start), name, line_no);
      field_start = field_end + 1;
    }
    out.push_back({{v[0], v[1]}, {v[2], v[3]}});
  }
  if (!header_seen) throw LoadError(std::string(name), 1, "missing header px,py,wx,wy");
  return out;
}

} // namespace garagemap
