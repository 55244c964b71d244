#include "garagemap/store.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "garagemap/error.hpp"
#include "garagemap/grid_core.hpp"

namespace garagemap {

namespace {

template <typename Record>
void sort_and_check_ids(std::vector<Record>& table, const char* name) {
  std::sort(table.begin(), table.end(), [](const Record& l, const Record& r) { return l.id < r.id; });
  for (std::size_t i = 1; i < table.size(); ++i)
    if (table[i].id == table[i - 1].id)
      throw Error(std::string("duplicate id ") + std::to_string(table[i].id) + " in " + name);
}

template <typename Record>
std::vector<Record> gather(const std::vector<Record>& table, const std::vector<std::size_t>& positions) {
  std::vector<Record> out;
  out.reserve(positions.size());
  for (const auto i : positions) out.push_back(table[i]);
  return out;
}

} // namespace

GridIndexedStore::GridIndexedStore(double cell_size, std::vector<SpaceRecord> spaces,
                                   std::vector<PathRecord> paths, std::vector<ObstacleRecord> obstacles,
                                   Outlines outlines)
    : cell_size_(cell_size), spaces_(std::move(spaces)), paths_(std::move(paths)),
      obstacles_(std::move(obstacles)), outlines_(std::move(outlines)) {
  if (!(cell_size_ > 0.0) || !std::isfinite(cell_size_)) throw ConfigError("store cell size must be positive");
  sort_and_check_ids(spaces_, "spaces");
  sort_and_check_ids(paths_, "paths");
  sort_and_check_ids(obstacles_, "obstacles");

  double min_x = std::numeric_limits<double>::infinity(), max_x = -min_x;
  double min_y = min_x, max_y = -min_x;
  auto extend = [&](double x, double y) {
    min_x = std::min(min_x, x);
    max_x = std::max(max_x, x);
    min_y = std::min(min_y, y);
    max_y = std::max(max_y, y);
  };
  for (const auto& s : spaces_) extend(s.x_coordinate, s.y_coordinate);
  for (const auto& o : obstacles_) extend(o.x_coordinate, o.y_coordinate);
  for (const auto& p : paths_) {
    extend(p.start_x, p.start_y);
    extend(p.end_x, p.end_y);
  }
  if (min_x > max_x) return; // empty store, empty index

  index_grid_.origin = {std::floor(min_x / cell_size_) * cell_size_, std::ceil(max_y / cell_size_) * cell_size_};
  index_grid_.cell_dx = index_grid_.cell_dy = cell_size_;
  const double cols = std::floor((max_x - index_grid_.origin.x) / cell_size_) + 1;
  const double rows = std::floor((index_grid_.origin.y - min_y) / cell_size_) + 1;
  if (!(cols < std::numeric_limits<int>::max()) || !(rows < std::numeric_limits<int>::max()))
    throw ConfigError("store extent is too large for cell size " + std::to_string(cell_size_));
  index_grid_.cols = static_cast<int>(cols);
  index_grid_.rows = static_cast<int>(rows);
  auto bucket = [&](Cell c) -> Bucket& {
    return buckets_[static_cast<std::int64_t>(c.row) * index_grid_.cols + c.col];
  };
  for (std::size_t i = 0; i < spaces_.size(); ++i)
    bucket(anchor_cell({spaces_[i].x_coordinate, spaces_[i].y_coordinate})).spaces.push_back(i);
  for (std::size_t i = 0; i < obstacles_.size(); ++i)
    bucket(anchor_cell({obstacles_[i].x_coordinate, obstacles_[i].y_coordinate})).obstacles.push_back(i);
  for (std::size_t i = 0; i < paths_.size(); ++i)
    for (const auto c : path_cells(paths_[i])) bucket(c).paths.push_back(i);
}

const SpaceRecord* GridIndexedStore::find_space(int id) const {
  const auto it = std::lower_bound(spaces_.begin(), spaces_.end(), id,
                                   [](const SpaceRecord& s, int key) { return s.id < key; });
  return it != spaces_.end() && it->id == id ? &*it : nullptr;
}

Cell GridIndexedStore::anchor_cell(Point2 p) const {
  const auto& g = index_grid_;
  const auto col = static_cast<long long>(std::floor((p.x - g.origin.x) / g.cell_dx));
  const auto row = static_cast<long long>(std::floor((g.origin.y - p.y) / g.cell_dy));
  // Anchors lie inside the index extent by construction; clamping absorbs rounding at its edges.
  return {static_cast<int>(std::clamp<long long>(row, 0, std::max(0, g.rows - 1))),
          static_cast<int>(std::clamp<long long>(col, 0, std::max(0, g.cols - 1)))};
}

CellRun GridIndexedStore::path_cells(const PathRecord& path) const {
  if (index_grid_.rows == 0) return {};
  return segment_cells({path.start_x, path.start_y}, {path.end_x, path.end_y}, index_grid_);
}

CellRecords GridIndexedStore::query_cell(int row, int col) const {
  if (row < 0 || col < 0 || row >= index_grid_.rows || col >= index_grid_.cols) return {};
  const auto it = buckets_.find(static_cast<std::int64_t>(row) * index_grid_.cols + col);
  if (it == buckets_.end()) return {};
  const Bucket& b = it->second;
  // Positions were appended in table order, so results are already sorted by id.
  return {gather(spaces_, b.spaces), gather(paths_, b.paths), gather(obstacles_, b.obstacles)};
}

CellRecords query_cell(const GridIndexedStore& store, int row, int col) { return store.query_cell(row, col); }

std::vector<MapElement> transform_elements(std::span<const MapElement> elements, const AffineTransform& t) {
  std::vector<MapElement> out(elements.begin(), elements.end());
  for (auto& el : out) {
    for (auto& p : el.geometry.vertices) p = apply_affine(t, p);
    if (el.corners)
      for (auto& p : el.corners->vertices) p = apply_affine(t, p);
    el.anchor = apply_affine(t, el.anchor);
  }
  return out;
}

GridIndexedStore build_store(std::span<const MapElement> elements, double cell_size, const StoreOptions& options) {
  if (!(cell_size > 0.0) || !std::isfinite(cell_size)) throw ConfigError("store cell size must be positive");
  std::vector<SpaceRecord> spaces;
  std::vector<PathRecord> paths;
  std::vector<ObstacleRecord> obstacles;
  Outlines outlines;
  int next_path_id = 1;
  for (const auto& el : elements) {
    switch (el.kind) {
      case ElementKind::ParkingSpace: {
        double area = polygon_metrics(el.geometry).area;
        if (el.corners) {
          area = polygon_metrics(Polygon{{el.corners->vertices.begin(), el.corners->vertices.end()}}).area;
        }
        const char type = area >= options.large_space_min_area ? 'L' : 'S';
        spaces.push_back({el.id, el.anchor.x, el.anchor.y, type});
        outlines.spaces[el.id] = el.geometry;
        break;
      }
      case ElementKind::Obstacle: {
        const double area = polygon_metrics(el.geometry).area;
        obstacles.push_back({el.id, el.anchor.x, el.anchor.y, area <= options.pillar_max_area ? 'P' : 'W'});
        outlines.obstacles[el.id] = el.geometry;
        break;
      }
      case ElementKind::Pathway: {
        const auto& v = el.geometry.vertices;
        // A two-vertex outline is a single open segment, not a ring.
        const std::size_t edges = v.size() == 2 ? 1 : v.size();
        for (std::size_t i = 0; i < edges && v.size() >= 2; ++i) {
          const Point2 a = v[i];
          const Point2 b = v[(i + 1) % v.size()];
          if (a == b) continue;
          paths.push_back({next_path_id++, a.x, a.y, b.x, b.y});
        }
        break;
      }
    }
  }
  return GridIndexedStore(cell_size, std::move(spaces), std::move(paths), std::move(obstacles), std::move(outlines));
}

SpaceRecord nearest_space(const GridIndexedStore& store, Point2 p, std::optional<char> type_filter) {
  const SpaceRecord* best = nullptr;
  double best_d = std::numeric_limits<double>::infinity();
  for (const auto& s : store.spaces()) {
    if (type_filter && s.space_type != *type_filter) continue;
    const double dx = s.x_coordinate - p.x, dy = s.y_coordinate - p.y;
    const double d = dx * dx + dy * dy;
    if (d < best_d) {
      best_d = d;
      best = &s;
    }
  }
  if (!best) throw LookupError("no parking space matches the request");
  return *best;
}

// ---------------------------------------------------------------------------
// CSV persistence.

namespace {

constexpr std::string_view kSpacesHeader = "id,x_coordinate,y_coordinate,space_type";
constexpr std::string_view kPathsHeader = "id,start_x,start_y,end_x,end_y";
constexpr std::string_view kObstaclesHeader = "id,x_coordinate,y_coordinate,obstacle_type";
constexpr std::string_view kOutlinesHeader = "table,id,vertex,x,y";

std::string num(double v) { return fmt::format("{:.17g}", v); }

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

// Iterates non-empty data lines after verifying the header.
template <typename Fn>
void for_each_row(std::string_view text, const std::string& file, std::string_view header, std::size_t fields,
                  Fn&& fn) {
  std::size_t start = 0;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!header_seen) {
      if (line != header) throw LoadError(file, line_no, "header must be '" + std::string(header) + "'");
      header_seen = true;
      continue;
    }
    if (line.empty()) continue;
    const auto f = split_fields(line);
    if (f.size() != fields)
      throw LoadError(file, line_no, "expected " + std::to_string(fields) + " fields, got " + std::to_string(f.size()));
    fn(f, line_no);
  }
  if (!header_seen) throw LoadError(file, 1, "missing header '" + std::string(header) + "'");
}

int parse_int(std::string_view s, const std::string& file, std::size_t line) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
    throw LoadError(file, line, "non-numeric field '" + std::string(s) + "'");
  return v;
}

double parse_num(std::string_view s, const std::string& file, std::size_t line) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty() || !std::isfinite(v))
    throw LoadError(file, line, "non-numeric field '" + std::string(s) + "'");
  return v;
}

char parse_code(std::string_view s, const std::string& file, std::size_t line) {
  if (s.size() != 1 || s[0] == ',' || static_cast<unsigned char>(s[0]) < 0x21)
    throw LoadError(file, line, "type code must be a single character, got '" + std::string(s) + "'");
  return s[0];
}

void check_unique(std::set<int>& seen, int id, const std::string& file, std::size_t line) {
  if (!seen.insert(id).second) throw LoadError(file, line, "duplicate id " + std::to_string(id));
}

std::string read_text(const std::filesystem::path& p) {
  const auto bytes = read_file_bytes(p.string());
  return {bytes.begin(), bytes.end()};
}

} // namespace

StoreFiles serialize_store(const GridIndexedStore& store) {
  StoreFiles f;
  f.spaces_csv = std::string(kSpacesHeader) + "\n";
  for (const auto& s : store.spaces())
    f.spaces_csv += fmt::format("{},{},{},{}\n", s.id, num(s.x_coordinate), num(s.y_coordinate), s.space_type);
  f.paths_csv = std::string(kPathsHeader) + "\n";
  for (const auto& p : store.paths())
    f.paths_csv += fmt::format("{},{},{},{},{}\n", p.id, num(p.start_x), num(p.start_y), num(p.end_x), num(p.end_y));
  f.obstacles_csv = std::string(kObstaclesHeader) + "\n";
  for (const auto& o : store.obstacles())
    f.obstacles_csv += fmt::format("{},{},{},{}\n", o.id, num(o.x_coordinate), num(o.y_coordinate), o.obstacle_type);

  const auto& outlines = store.outlines();
  if (!outlines.spaces.empty() || !outlines.obstacles.empty()) {
    f.outlines_csv = std::string(kOutlinesHeader) + "\n";
    auto write = [&](const char* table, const std::map<int, Polygon>& polys) {
      for (const auto& [id, poly] : polys)
        for (std::size_t i = 0; i < poly.size(); ++i)
          f.outlines_csv += fmt::format("{},{},{},{},{}\n", table, id, i, num(poly.vertices[i].x), num(poly.vertices[i].y));
    };
    write("space", outlines.spaces);
    write("obstacle", outlines.obstacles);
  }
  return f;
}

GridIndexedStore deserialize_store(const StoreFiles& files, double cell_size) {
  std::vector<SpaceRecord> spaces;
  std::vector<PathRecord> paths;
  std::vector<ObstacleRecord> obstacles;
  Outlines outlines;

  {
    const std::string file = "spaces.csv";
    std::set<int> seen;
    for_each_row(files.spaces_csv, file, kSpacesHeader, 4, [&](const auto& f, std::size_t line) {
      SpaceRecord r{parse_int(f[0], file, line), parse_num(f[1], file, line), parse_num(f[2], file, line),
                    parse_code(f[3], file, line)};
      check_unique(seen, r.id, file, line);
      spaces.push_back(r);
    });
  }
  {
    const std::string file = "paths.csv";
    std::set<int> seen;
    for_each_row(files.paths_csv, file, kPathsHeader, 5, [&](const auto& f, std::size_t line) {
      PathRecord r{parse_int(f[0], file, line), parse_num(f[1], file, line), parse_num(f[2], file, line),
                   parse_num(f[3], file, line), parse_num(f[4], file, line)};
      check_unique(seen, r.id, file, line);
      if (r.start_x == r.end_x && r.start_y == r.end_y) throw LoadError(file, line, "path start equals end");
      paths.push_back(r);
    });
  }
  {
    const std::string file = "obstacles.csv";
    std::set<int> seen;
    for_each_row(files.obstacles_csv, file, kObstaclesHeader, 4, [&](const auto& f, std::size_t line) {
      ObstacleRecord r{parse_int(f[0], file, line), parse_num(f[1], file, line), parse_num(f[2], file, line),
                       parse_code(f[3], file, line)};
      check_unique(seen, r.id, file, line);
      obstacles.push_back(r);
    });
  }
  if (!files.outlines_csv.empty()) {
    const std::string file = "outlines.csv";
    for_each_row(files.outlines_csv, file, kOutlinesHeader, 5, [&](const auto& f, std::size_t line) {
      std::map<int, Polygon>* target = nullptr;
      if (f[0] == "space") target = &outlines.spaces;
      else if (f[0] == "obstacle") target = &outlines.obstacles;
      else throw LoadError(file, line, "table must be 'space' or 'obstacle'");
      const int id = parse_int(f[1], file, line);
      const int vertex = parse_int(f[2], file, line);
      Polygon& poly = (*target)[id];
      if (vertex != static_cast<int>(poly.size())) throw LoadError(file, line, "vertices must be listed in order");
      poly.vertices.push_back({parse_num(f[3], file, line), parse_num(f[4], file, line)});
    });
  }
  return GridIndexedStore(cell_size, std::move(spaces), std::move(paths), std::move(obstacles), std::move(outlines));
}

void save_store(const GridIndexedStore& store, const std::string& directory) {
  namespace fs = std::filesystem;
  fs::create_directories(directory);
  const StoreFiles f = serialize_store(store);
  const fs::path dir(directory);
  write_file_text((dir / "spaces.csv").string(), f.spaces_csv);
  write_file_text((dir / "paths.csv").string(), f.paths_csv);
  write_file_text((dir / "obstacles.csv").string(), f.obstacles_csv);
  if (!f.outlines_csv.empty()) {
    write_file_text((dir / "outlines.csv").string(), f.outlines_csv);
  } else {
    fs::remove(dir / "outlines.csv");
  }
}

GridIndexedStore load_store(const std::string& directory, double cell_size) {
  namespace fs = std::filesystem;
  const fs::path dir(directory);
  StoreFiles f;
  for (const auto* name : {"spaces.csv", "paths.csv", "obstacles.csv"})
    if (!fs::exists(dir / name)) throw LoadError((dir / name).string(), 0, "file not found");
  f.spaces_csv = read_text(dir / "spaces.csv");
  f.paths_csv = read_text(dir / "paths.csv");
  f.obstacles_csv = read_text(dir / "obstacles.csv");
  if (fs::exists(dir / "outlines.csv")) f.outlines_csv = read_text(dir / "outlines.csv");
  try {
    return deserialize_store(f, cell_size);
  } catch (const LoadError& e) {
    throw LoadError((dir / e.file()).string(), e.line(), e.detail());
  }
}

// ---------------------------------------------------------------------------
// SQL.

std::string emit_sql_ddl(const GridIndexedStore& store) {
  std::ostringstream out;
  out << "DROP TABLE IF EXISTS spaces;\n"
         "CREATE TABLE spaces (\n"
         "  id INT PRIMARY KEY,\n"
         "  x_coordinate DOUBLE,\n"
         "  y_coordinate DOUBLE,\n"
         "  space_type CHAR(1)\n"
         ");\n"
         "DROP TABLE IF EXISTS paths;\n"
         "CREATE TABLE paths (\n"
         "  id INT PRIMARY KEY,\n"
         "  start_x DOUBLE,\n"
         "  start_y DOUBLE,\n"
         "  end_x DOUBLE,\n"
         "  end_y DOUBLE\n"
         ");\n"
         "DROP TABLE IF EXISTS obstacles;\n"
         "CREATE TABLE obstacles (\n"
         "  id INT PRIMARY KEY,\n"
         "  x_coordinate DOUBLE,\n"
         "  y_coordinate DOUBLE,\n"
         "  obstacle_type CHAR(1)\n"
         ");\n";
  auto quote = [](char c) { return c == '\'' ? std::string("''''") : "'" + std::string(1, c) + "'"; };
  for (const auto& s : store.spaces())
    out << fmt::format("INSERT INTO spaces (id, x_coordinate, y_coordinate, space_type) VALUES ({}, {}, {}, {});\n",
                       s.id, num(s.x_coordinate), num(s.y_coordinate), quote(s.space_type));
  for (const auto& p : store.paths())
    out << fmt::format("INSERT INTO paths (id, start_x, start_y, end_x, end_y) VALUES ({}, {}, {}, {}, {});\n", p.id,
                       num(p.start_x), num(p.start_y), num(p.end_x), num(p.end_y));
  for (const auto& o : store.obstacles())
    out << fmt::format(
        "INSERT INTO obstacles (id, x_coordinate, y_coordinate, obstacle_type) VALUES ({}, {}, {}, {});\n", o.id,
        num(o.x_coordinate), num(o.y_coordinate), quote(o.obstacle_type));
  return out.str();
}

} // namespace garagemap
