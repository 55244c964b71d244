#include "garagemap/nav.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>

#include <fmt/format.h>

#include "garagemap/error.hpp"

namespace garagemap {

std::string_view to_string(Heading h) {
  static constexpr std::array<std::string_view, 8> names{"N", "NE", "E", "SE", "S", "SW", "W", "NW"};
  return names[static_cast<int>(h)];
}

std::string_view to_string(Turn t) {
  switch (t) {
    case Turn::Start: return "start";
    case Turn::Left: return "left";
    case Turn::Right: return "right";
    case Turn::UTurn: return "u-turn";
  }
  return "start";
}

namespace {

template <typename Fn>
void for_each_coordinate(const GridIndexedStore& store, Fn&& fn) {
  for (const auto& s : store.spaces()) fn(Point2{s.x_coordinate, s.y_coordinate});
  for (const auto& o : store.obstacles()) fn(Point2{o.x_coordinate, o.y_coordinate});
  for (const auto& p : store.paths()) {
    fn(Point2{p.start_x, p.start_y});
    fn(Point2{p.end_x, p.end_y});
  }
  for (const auto& [id, poly] : store.outlines().spaces)
    for (const auto& v : poly.vertices) fn(v);
  for (const auto& [id, poly] : store.outlines().obstacles)
    for (const auto& v : poly.vertices) fn(v);
}

Polygon obstacle_outline(const GridIndexedStore& store, const ObstacleRecord& o) {
  const auto it = store.outlines().obstacles.find(o.id);
  return it != store.outlines().obstacles.end() ? it->second : Polygon{{{o.x_coordinate, o.y_coordinate}}};
}

std::optional<Cell> cell_if_inside(Point2 p, const GridSpec& g) {
  const double col = std::floor((p.x - g.origin.x) / g.cell_dx);
  const double row = std::floor((g.origin.y - p.y) / g.cell_dy);
  const Cell c{static_cast<int>(row), static_cast<int>(col)};
  if (row < 0 || col < 0 || row >= g.rows || col >= g.cols) return std::nullopt;
  return c;
}

} // namespace

GridSpec covering_grid(const GridIndexedStore& store, double cell_dx, double cell_dy) {
  if (!(cell_dx > 0.0) || !(cell_dy > 0.0)) throw ConfigError("grid cell size must be positive");
  double min_x = std::numeric_limits<double>::infinity(), max_x = -min_x;
  double min_y = min_x, max_y = -min_x;
  for_each_coordinate(store, [&](Point2 p) {
    min_x = std::min(min_x, p.x);
    max_x = std::max(max_x, p.x);
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
  });
  if (min_x > max_x) return GridSpec{{0.0, 0.0}, cell_dx, cell_dy, 1, 1};
  GridSpec g;
  g.origin = {std::floor(min_x / cell_dx) * cell_dx, std::ceil(max_y / cell_dy) * cell_dy};
  g.cell_dx = cell_dx;
  g.cell_dy = cell_dy;
  g.cols = std::max(1, static_cast<int>(std::ceil((max_x - g.origin.x) / cell_dx)));
  g.rows = std::max(1, static_cast<int>(std::ceil((g.origin.y - min_y) / cell_dy)));
  return g;
}

OccupancyGrid build_occupancy(const GridIndexedStore& store, const GridSpec& g) {
  g.validate();
  const double x_max = g.origin.x + g.cols * g.cell_dx;
  const double y_min = g.origin.y - g.rows * g.cell_dy;
  for_each_coordinate(store, [&](Point2 p) {
    if (p.x < g.origin.x || p.x > x_max || p.y < y_min || p.y > g.origin.y)
      throw BoundsError("stored geometry lies outside the navigation grid",
                        static_cast<long long>(std::floor((g.origin.y - p.y) / g.cell_dy)),
                        static_cast<long long>(std::floor((p.x - g.origin.x) / g.cell_dx)));
  });

  OccupancyGrid occ{BitGrid(g.cols, g.rows), g};
  for (const auto& o : store.obstacles())
    for (const auto c : footprint_cells(obstacle_outline(store, o), g)) occ.grid.at(c.row, c.col) = 1;
  for (const auto& [id, poly] : store.outlines().spaces)
    for (const auto c : footprint_cells(poly, g)) occ.grid.at(c.row, c.col) = 1;
  for (const auto& s : store.spaces())
    if (const auto c = cell_if_inside({s.x_coordinate, s.y_coordinate}, g)) occ.grid.at(c->row, c->col) = 0;
  return occ;
}

OccupancyGrid open_space(const OccupancyGrid& occ, const GridIndexedStore& store, int space_id) {
  if (!store.find_space(space_id)) throw LookupError("no parking space with id " + std::to_string(space_id));
  OccupancyGrid out = occ;
  const auto it = store.outlines().spaces.find(space_id);
  if (it != store.outlines().spaces.end())
    for (const auto c : footprint_cells(it->second, occ.spec)) out.grid.at(c.row, c.col) = 0;
  return out;
}

// ---------------------------------------------------------------------------
// Search.

namespace {

struct Move {
  int d_row;
  int d_col;
};
// N, E, S, W, NE, SE, SW, NW
constexpr std::array<Move, 8> kMoves{{{-1, 0}, {0, 1}, {1, 0}, {0, -1}, {-1, 1}, {1, 1}, {1, -1}, {-1, -1}}};

Heading heading_of(int d_row, int d_col) {
  if (d_row < 0 && d_col == 0) return Heading::N;
  if (d_row < 0 && d_col > 0) return Heading::NE;
  if (d_row == 0 && d_col > 0) return Heading::E;
  if (d_row > 0 && d_col > 0) return Heading::SE;
  if (d_row > 0 && d_col == 0) return Heading::S;
  if (d_row > 0 && d_col < 0) return Heading::SW;
  if (d_row == 0 && d_col < 0) return Heading::W;
  return Heading::NW;
}

double step_length(int d_row, int d_col, double dx, double dy) {
  if (d_row != 0 && d_col != 0) return std::hypot(dx, dy);
  return d_row != 0 ? dy : dx;
}

} // namespace

Route shortest_path(const OccupancyGrid& occ, Cell start, Cell goal, int connectivity) {
  if (connectivity != 4 && connectivity != 8) throw ConfigError("connectivity must be 4 or 8");
  if (!occ.spec.contains(start) || !occ.spec.contains(goal)) throw PlacementError("route endpoint lies off the grid");
  if (!occ.free(start)) throw PlacementError("route start lies on an occupied cell");
  if (!occ.free(goal)) throw PlacementError("route goal lies on an occupied cell");

  const int cols = occ.spec.cols;
  const int rows = occ.spec.rows;
  const auto index = [cols](Cell c) { return static_cast<std::size_t>(c.row) * cols + c.col; };
  std::vector<double> dist(static_cast<std::size_t>(rows) * cols, std::numeric_limits<double>::infinity());
  std::vector<std::int64_t> parent(dist.size(), -1);
  std::vector<bool> settled(dist.size(), false);

  using Entry = std::pair<double, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  dist[index(start)] = 0.0;
  open.push({0.0, index(start)});
  const std::size_t goal_index = index(goal);

  while (!open.empty()) {
    const auto [d, at] = open.top();
    open.pop();
    if (settled[at]) continue;
    settled[at] = true;
    if (at == goal_index) break;
    const Cell cur{static_cast<int>(at / cols), static_cast<int>(at % cols)};
    for (int m = 0; m < connectivity; ++m) {
      const Cell next{cur.row + kMoves[m].d_row, cur.col + kMoves[m].d_col};
      if (!occ.free(next)) continue;
      if (m >= 4 && !occ.free({cur.row + kMoves[m].d_row, cur.col}) && !occ.free({cur.row, cur.col + kMoves[m].d_col}))
        continue;
      const std::size_t ni = index(next);
      const double nd = d + step_length(kMoves[m].d_row, kMoves[m].d_col, occ.spec.cell_dx, occ.spec.cell_dy);
      if (nd < dist[ni]) {
        dist[ni] = nd;
        parent[ni] = static_cast<std::int64_t>(at);
        open.push({nd, ni});
      }
    }
  }
  if (!settled[goal_index]) throw UnreachableError("no route connects the start and goal cells");

  Route route;
  route.cell_dx = occ.spec.cell_dx;
  route.cell_dy = occ.spec.cell_dy;
  for (std::int64_t at = static_cast<std::int64_t>(goal_index); at != -1; at = parent[static_cast<std::size_t>(at)])
    route.cells.push_back({static_cast<int>(at / cols), static_cast<int>(at % cols)});
  std::reverse(route.cells.begin(), route.cells.end());
  for (std::size_t i = 1; i < route.cells.size(); ++i)
    route.length += step_length(route.cells[i].row - route.cells[i - 1].row, route.cells[i].col - route.cells[i - 1].col,
                                route.cell_dx, route.cell_dy);
  route.instructions = route_instructions(route);
  return route;
}

std::vector<Instruction> route_instructions(const Route& route) {
  std::vector<Instruction> out;
  for (std::size_t i = 1; i < route.cells.size(); ++i) {
    const int d_row = route.cells[i].row - route.cells[i - 1].row;
    const int d_col = route.cells[i].col - route.cells[i - 1].col;
    const Heading h = heading_of(d_row, d_col);
    const double len = step_length(d_row, d_col, route.cell_dx, route.cell_dy);
    if (!out.empty() && out.back().heading == h) {
      out.back().distance += len;
      continue;
    }
    Turn turn = Turn::Start;
    if (!out.empty()) {
      const int pr = route.cells[i - 1].row - route.cells[i - 2].row;
      const int pc = route.cells[i - 1].col - route.cells[i - 2].col;
      // Cross product in a y-up frame: (col, -row).
      const int cross = pc * (-d_row) - (-pr) * d_col;
      if (cross > 0) turn = Turn::Left;
      else if (cross < 0) turn = Turn::Right;
      else turn = Turn::UTurn;
    }
    out.push_back({turn, h, len});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Rendering.

OverlayFormat parse_overlay_format(std::string_view tag) {
  std::string lower(tag);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "ppm") return OverlayFormat::PPM;
  if (lower == "svg") return OverlayFormat::SVG;
  throw ConfigError("unsupported overlay format '" + std::string(tag) + "'");
}

namespace {

using Rgb = std::array<std::uint8_t, 3>;
constexpr Rgb kWhite{255, 255, 255};
constexpr Rgb kBlack{0, 0, 0};
constexpr Rgb kBlue{0, 0, 255};
constexpr Rgb kRed{255, 0, 0};
constexpr Rgb kGreen{0, 255, 0};

std::vector<Cell> anchor_cells(const OccupancyGrid& occ, const GridIndexedStore& store) {
  std::vector<Cell> out;
  for (const auto& s : store.spaces())
    if (const auto c = cell_if_inside({s.x_coordinate, s.y_coordinate}, occ.spec)) out.push_back(*c);
  return out;
}

std::vector<std::uint8_t> render_ppm(const OccupancyGrid& occ, const Route* route, const GridIndexedStore& store,
                                     int scale) {
  const int rows = occ.spec.rows, cols = occ.spec.cols;
  std::vector<Rgb> cell_color(static_cast<std::size_t>(rows) * cols, kWhite);
  auto at = [&](Cell c) -> Rgb& { return cell_color[static_cast<std::size_t>(c.row) * cols + c.col]; };
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      if (occ.grid.at(r, c)) at({r, c}) = kBlack;
  for (const auto c : anchor_cells(occ, store)) at(c) = kBlue;
  if (route)
    for (const auto c : route->cells)
      if (occ.spec.contains(c)) at(c) = kRed;

  RasterGrid img(cols * scale, rows * scale, 3);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      for (int y = 0; y < scale; ++y)
        for (int x = 0; x < scale; ++x)
          for (int ch = 0; ch < 3; ++ch) img.at(r * scale + y, c * scale + x, ch) = at({r, c})[ch];

  if (route && !route->cells.empty() && scale >= 3) {
    for (const auto c : {route->cells.front(), route->cells.back()}) {
      if (!occ.spec.contains(c)) continue;
      for (int y = 1; y < scale - 1; ++y)
        for (int x = 1; x < scale - 1; ++x)
          for (int ch = 0; ch < 3; ++ch) img.at(c.row * scale + y, c.col * scale + x, ch) = kGreen[ch];
    }
  }
  return encode_ppm(img);
}

std::vector<std::uint8_t> render_svg(const OccupancyGrid& occ, const Route* route, const GridIndexedStore& store,
                                     int scale) {
  const int unit = 10 * scale;
  const int rows = occ.spec.rows, cols = occ.spec.cols;
  std::string out = fmt::format(
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">\n"
      "<rect x=\"0\" y=\"0\" width=\"{0}\" height=\"{1}\" fill=\"#ffffff\"/>\n",
      cols * unit, rows * unit);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      if (occ.grid.at(r, c))
        out += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"#000000\"/>\n", c * unit, r * unit,
                           unit, unit);
  for (const auto c : anchor_cells(occ, store))
    out += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"#0000ff\"/>\n", c.col * unit,
                       c.row * unit, unit, unit);
  if (route && !route->cells.empty()) {
    out += "<polyline fill=\"none\" stroke=\"#ff0000\" stroke-width=\"" + std::to_string(std::max(1, unit / 3)) +
           "\" points=\"";
    for (std::size_t i = 0; i < route->cells.size(); ++i) {
      const auto& c = route->cells[i];
      out += fmt::format("{}{},{}", i ? " " : "", c.col * unit + unit / 2, c.row * unit + unit / 2);
    }
    out += "\"/>\n";
    for (const auto c : {route->cells.front(), route->cells.back()})
      out += fmt::format("<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"#00ff00\"/>\n", c.col * unit + unit / 2,
                         c.row * unit + unit / 2, std::max(1, unit / 3));
  }
  out += "</svg>\n";
  return {out.begin(), out.end()};
}

} // namespace

std::vector<std::uint8_t> render_overlay(const OccupancyGrid& occ, const Route* route, const GridIndexedStore& store,
                                         OverlayFormat format, int scale) {
  if (scale < 1) throw ConfigError("overlay scale must be at least 1");
  return format == OverlayFormat::PPM ? render_ppm(occ, route, store, scale) : render_svg(occ, route, store, scale);
}

std::vector<std::uint8_t> render_overlay(const OccupancyGrid& occ, const Route* route, const GridIndexedStore& store,
                                         std::string_view format, int scale) {
  return render_overlay(occ, route, store, parse_overlay_format(format), scale);
}

// ---------------------------------------------------------------------------
// Route CSV.

std::string route_to_csv(const Route& route) {
  std::string out;
  for (const auto& c : route.cells) out += fmt::format("{},{}\n", c.row, c.col);
  out += fmt::format("length,{:.17g}\n", route.length);
  return out;
}

Route route_from_csv(std::string_view text, double cell_dx, double cell_dy) {
  Route route;
  route.cell_dx = cell_dx;
  route.cell_dy = cell_dy;
  std::size_t start = 0;
  bool have_length = false;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    const std::size_t offset = start;
    start = end + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (have_length) throw FormatError("data after the length record", offset);
    const std::size_t comma = line.find(',');
    if (comma == std::string_view::npos) throw FormatError("expected two comma-separated fields", offset);
    const std::string_view a = line.substr(0, comma), b = line.substr(comma + 1);
    if (a == "length") {
      auto [p, ec] = std::from_chars(b.data(), b.data() + b.size(), route.length);
      if (ec != std::errc{} || p != b.data() + b.size()) throw FormatError("bad route length", offset);
      have_length = true;
      continue;
    }
    Cell c;
    auto [p1, e1] = std::from_chars(a.data(), a.data() + a.size(), c.row);
    auto [p2, e2] = std::from_chars(b.data(), b.data() + b.size(), c.col);
    if (e1 != std::errc{} || e2 != std::errc{} || p1 != a.data() + a.size() || p2 != b.data() + b.size())
      throw FormatError("bad route cell", offset);
    route.cells.push_back(c);
  }
  if (!have_length) throw FormatError("route is missing its length record", text.size());
  route.instructions = route_instructions(route);
  return route;
}

} // namespace garagemap
