#include "garagemap/rasterize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>

#include "garagemap/error.hpp"

namespace garagemap {

namespace {

// floor(a / b) for b > 0.
long long floor_div(long long a, long long b) {
  const long long q = a / b;
  return (a % b != 0 && a < 0) ? q - 1 : q;
}

long long ceil_div(long long a, long long b) { return -floor_div(-a, b); }

// round_half_up(num / den) for den > 0.
long long round_half_up(long long num, long long den) { return floor_div(2 * num + den, 2 * den); }

int sign(int v) { return (v > 0) - (v < 0); }

} // namespace

Cell rasterize_point(Point2 p, const GridSpec& g) { return world_to_cell(p, g); }

CellRun line_eight_direction(Cell from, Cell to) {
  const int d_row = to.row - from.row;
  const int d_col = to.col - from.col;
  CellRun run;
  if (std::abs(d_col) >= std::abs(d_row)) {
    const int n = std::abs(d_col);
    run.reserve(n + 1);
    if (n == 0) return {from};
    const int step = sign(d_col);
    for (int k = 0; k <= n; ++k) {
      const auto offset = round_half_up(static_cast<long long>(k) * d_row, n);
      run.push_back({from.row + static_cast<int>(offset), from.col + k * step});
    }
  } else {
    const int n = std::abs(d_row);
    run.reserve(n + 1);
    const int step = sign(d_row);
    for (int k = 0; k <= n; ++k) {
      const auto offset = round_half_up(static_cast<long long>(k) * d_col, n);
      run.push_back({from.row + k * step, from.col + static_cast<int>(offset)});
    }
  }
  return run;
}

CellRun line_full_path(Cell from, Cell to) {
  // Doubled coordinates put cell centers on odd integers and cell edges on even ones.
  const long long v0 = 2LL * from.row + 1, u0 = 2LL * from.col + 1;
  const long long v1 = 2LL * to.row + 1, u1 = 2LL * to.col + 1;
  const long long dv = v1 - v0, du = u1 - u0;
  const int col_step = du >= 0 ? 1 : -1;

  CellRun run;
  auto emit_strip = [&](int row, long long j_lo, long long j_hi) {
    if (col_step > 0) {
      for (long long j = j_lo; j <= j_hi; ++j) run.push_back({row, static_cast<int>(j)});
    } else {
      for (long long j = j_hi; j >= j_lo; --j) run.push_back({row, static_cast<int>(j)});
    }
  };

  if (dv == 0) {
    emit_strip(from.row, std::min(from.col, to.col), std::max(from.col, to.col));
    return run;
  }

  const long long den = std::abs(dv);
  const long long v_min = std::min(v0, v1), v_max = std::max(v0, v1);
  // u(v) * den as an exact integer.
  auto u_num = [&](long long v) {
    const long long n = u0 * dv + (v - v0) * du;
    return dv > 0 ? n : -n;
  };
  const int row_step = dv > 0 ? 1 : -1;
  for (int row = from.row;; row += row_step) {
    const long long lo = std::max(2LL * row, v_min);
    const long long hi = std::min(2LL * row + 2, v_max);
    const long long a = u_num(lo), b = u_num(hi);
    const long long n_min = std::min(a, b), n_max = std::max(a, b);
    emit_strip(row, ceil_div(n_min, 2 * den) - 1, floor_div(n_max, 2 * den));
    if (row == to.row) break;
  }
  return run;
}

CellRun segment_cells(Point2 from, Point2 to, const GridSpec& g) {
  // Cell units: u grows with columns, v with rows.
  const double u0 = (from.x - g.origin.x) / g.cell_dx, v0 = (g.origin.y - from.y) / g.cell_dy;
  const double u1 = (to.x - g.origin.x) / g.cell_dx, v1 = (g.origin.y - to.y) / g.cell_dy;
  const double du = u1 - u0, dv = v1 - v0;
  const int col_step = du >= 0 ? 1 : -1;
  const int row_step = dv >= 0 ? 1 : -1;

  auto row_range = [&](double lo, double hi) {
    return std::pair{static_cast<long long>(std::ceil(lo)) - 1, static_cast<long long>(std::floor(hi))};
  };
  auto [r_lo, r_hi] = row_range(std::min(v0, v1), std::max(v0, v1));

  CellRun run;
  auto emit = [&](long long row, double ua, double ub) {
    if (row < 0 || row >= g.rows) return;
    long long j_lo = static_cast<long long>(std::ceil(std::min(ua, ub))) - 1;
    long long j_hi = static_cast<long long>(std::floor(std::max(ua, ub)));
    j_lo = std::max<long long>(j_lo, 0);
    j_hi = std::min<long long>(j_hi, g.cols - 1);
    if (col_step > 0) {
      for (long long j = j_lo; j <= j_hi; ++j) run.push_back({static_cast<int>(row), static_cast<int>(j)});
    } else {
      for (long long j = j_hi; j >= j_lo; --j) run.push_back({static_cast<int>(row), static_cast<int>(j)});
    }
  };

  const long long first = row_step > 0 ? r_lo : r_hi;
  const long long last = row_step > 0 ? r_hi : r_lo;
  for (long long row = first;; row += row_step) {
    if (dv == 0.0) {
      emit(row, u0, u1);
    } else {
      const double lo = std::max(static_cast<double>(row), std::min(v0, v1));
      const double hi = std::min(static_cast<double>(row + 1), std::max(v0, v1));
      emit(row, u0 + (lo - v0) * du / dv, u0 + (hi - v0) * du / dv);
    }
    if (row == last) break;
  }
  return run;
}

std::vector<Point2> polygon_grid_sample(const Polygon& poly, double interval_x, double interval_y,
                                        Point2 origin) {
  if (!(interval_x > 0.0) || !(interval_y > 0.0)) throw Error("sampling intervals must be positive");
  if (poly.size() < 3 || signed_area(poly) == 0.0) return {};
  double min_x = std::numeric_limits<double>::infinity(), max_x = -min_x;
  double min_y = min_x, max_y = -min_x;
  for (const auto& p : poly.vertices) {
    min_x = std::min(min_x, p.x);
    max_x = std::max(max_x, p.x);
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
  }
  const auto m_lo = static_cast<long long>(std::ceil((min_x - origin.x) / interval_x));
  const auto m_hi = static_cast<long long>(std::floor((max_x - origin.x) / interval_x));
  const auto n_lo = static_cast<long long>(std::ceil((min_y - origin.y) / interval_y));
  const auto n_hi = static_cast<long long>(std::floor((max_y - origin.y) / interval_y));

  std::vector<Point2> out;
  for (long long n = n_lo; n <= n_hi; ++n) {
    for (long long m = m_lo; m <= m_hi; ++m) {
      const Point2 p{origin.x + m * interval_x, origin.y + n * interval_y};
      if (point_in_polygon(poly, p)) out.push_back(p);
    }
  }
  return out;
}

CellRun polygon_fill(const Polygon& poly, const GridSpec& g) {
  if (poly.size() < 3) return {};
  double min_x = std::numeric_limits<double>::infinity(), max_x = -min_x;
  double min_y = min_x, max_y = -min_x;
  for (const auto& p : poly.vertices) {
    min_x = std::min(min_x, p.x);
    max_x = std::max(max_x, p.x);
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
  }
  // Candidate rows/cols are those whose centers can fall inside the bounding box.
  const long long row_lo = std::max<long long>(0, static_cast<long long>(std::ceil((g.origin.y - max_y) / g.cell_dy - 0.5)));
  const long long row_hi = std::min<long long>(g.rows - 1, static_cast<long long>(std::floor((g.origin.y - min_y) / g.cell_dy - 0.5)));
  const long long col_lo = std::max<long long>(0, static_cast<long long>(std::ceil((min_x - g.origin.x) / g.cell_dx - 0.5)));
  const long long col_hi = std::min<long long>(g.cols - 1, static_cast<long long>(std::floor((max_x - g.origin.x) / g.cell_dx - 0.5)));

  const auto& v = poly.vertices;
  CellRun run;
  std::vector<std::pair<Point2, Point2>> spanning;
  for (long long row = row_lo; row <= row_hi; ++row) {
    const double y = g.origin.y - (row + 0.5) * g.cell_dy;
    spanning.clear();
    for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
      if (std::min(v[j].y, v[i].y) <= y && y <= std::max(v[j].y, v[i].y)) spanning.emplace_back(v[j], v[i]);
    }
    for (long long col = col_lo; col <= col_hi; ++col) {
      const Point2 c{g.origin.x + (col + 0.5) * g.cell_dx, y};
      bool inside = false;
      bool on_edge = false;
      for (const auto& [a, b] : spanning) {
        if (edge_cross(a, b, c) == 0.0 && c.x >= std::min(a.x, b.x) && c.x <= std::max(a.x, b.x)) {
          on_edge = true;
          break;
        }
        if ((a.y > c.y) != (b.y > c.y)) {
          const double x_cross = a.x + (c.y - a.y) * (b.x - a.x) / (b.y - a.y);
          if (c.x < x_cross) inside = !inside;
        }
      }
      if (on_edge || inside) run.push_back({static_cast<int>(row), static_cast<int>(col)});
    }
  }
  return run;
}

CellRun footprint_cells(const Polygon& outline, const GridSpec& g) {
  switch (outline.size()) {
    case 0:
      return {};
    case 1: {
      const auto& p = outline.vertices.front();
      const double col = std::floor((p.x - g.origin.x) / g.cell_dx);
      const double row = std::floor((g.origin.y - p.y) / g.cell_dy);
      const Cell c{static_cast<int>(row), static_cast<int>(col)};
      if (row < 0 || col < 0 || row >= g.rows || col >= g.cols) return {};
      return {c};
    }
    case 2:
      return segment_cells(outline.vertices[0], outline.vertices[1], g);
    default:
      return polygon_fill(outline, g);
  }
}

double idw_interpolate(std::span<const Sample> samples, Point2 query, double power) {
  if (samples.empty()) throw ArityError("IDW needs at least one sample");
  if (!(power > 0.0)) throw Error("IDW power must be positive");
  double d_min = std::numeric_limits<double>::infinity();
  double v_min = samples.front().value, v_max = samples.front().value;
  for (const auto& s : samples) {
    const double d = std::hypot(s.location.x - query.x, s.location.y - query.y);
    if (d < 1e-12) return s.value;
    d_min = std::min(d_min, d);
    v_min = std::min(v_min, s.value);
    v_max = std::max(v_max, s.value);
  }
  // Weights scaled by d_min^p so the nearest sample weighs 1; avoids overflow at high powers.
  double num = 0.0, den = 0.0;
  for (const auto& s : samples) {
    const double d = std::hypot(s.location.x - query.x, s.location.y - query.y);
    const double w = std::pow(d_min / d, power);
    num += w * s.value;
    den += w;
  }
  return std::clamp(num / den, v_min, v_max);
}

BitGrid raster_from_elements(std::span<const MapElement> elements, const GridSpec& g) {
  g.validate();
  BitGrid grid(g.cols, g.rows);
  const double x_max = g.origin.x + g.cols * g.cell_dx;
  const double y_min = g.origin.y - g.rows * g.cell_dy;
  for (const auto& el : elements) {
    if (el.kind == ElementKind::Pathway) continue;
    for (const auto& p : el.geometry.vertices) {
      if (p.x < g.origin.x || p.x > x_max || p.y < y_min || p.y > g.origin.y) {
        throw BoundsError("element " + std::to_string(el.id) + " lies outside the grid extent",
                          static_cast<long long>(std::floor((g.origin.y - p.y) / g.cell_dy)),
                          static_cast<long long>(std::floor((p.x - g.origin.x) / g.cell_dx)));
      }
    }
    for (const auto& c : footprint_cells(el.geometry, g)) grid.at(c.row, c.col) = 1;
  }
  return grid;
}

} // namespace garagemap
