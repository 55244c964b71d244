#pragma once

#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "garagemap/georef.hpp"
#include "garagemap/rasterize.hpp"
#include "garagemap/vectorize.hpp"

namespace garagemap {

// Parking table row.
struct SpaceRecord {
  int id = 0;
  double x_coordinate = 0.0;
  double y_coordinate = 0.0;
  char space_type = 'S'; // S small, L large, N no-parking

  bool operator==(const SpaceRecord&) const = default;
};

// Routing table row: one straight path segment.
struct PathRecord {
  int id = 0;
  double start_x = 0.0;
  double start_y = 0.0;
  double end_x = 0.0;
  double end_y = 0.0;

  bool operator==(const PathRecord&) const = default;
};

// Obstacle table row.
struct ObstacleRecord {
  int id = 0;
  double x_coordinate = 0.0;
  double y_coordinate = 0.0;
  char obstacle_type = 'W'; // W wall, P pillar

  bool operator==(const ObstacleRecord&) const = default;
};

struct CellRecords {
  std::vector<SpaceRecord> spaces;
  std::vector<PathRecord> paths;
  std::vector<ObstacleRecord> obstacles;
};

// Footprint outlines keyed by record id. Not part of the three tables; kept so
// the navigation grid can be rebuilt from a stored map.
struct Outlines {
  std::map<int, Polygon> spaces;
  std::map<int, Polygon> obstacles;

  bool operator==(const Outlines&) const = default;
};

struct StoreOptions {
  // Spaces whose corner quad reaches this area are typed 'L'.
  double large_space_min_area = std::numeric_limits<double>::infinity();
  // Obstacles up to this outline area are typed 'P' (pillar), larger ones 'W'.
  double pillar_max_area = 0.0;
};

// Classified tables plus a uniform grid index over them. Immutable once built.
class GridIndexedStore {
public:
  GridIndexedStore() = default;
  // Validates id uniqueness (throws Error) and builds the index.
  GridIndexedStore(double cell_size, std::vector<SpaceRecord> spaces, std::vector<PathRecord> paths,
                   std::vector<ObstacleRecord> obstacles, Outlines outlines = {});

  double cell_size() const { return cell_size_; }
  // Index lattice; rows/cols are 0 for an empty store.
  const GridSpec& index_grid() const { return index_grid_; }

  const std::vector<SpaceRecord>& spaces() const { return spaces_; }
  const std::vector<PathRecord>& paths() const { return paths_; }
  const std::vector<ObstacleRecord>& obstacles() const { return obstacles_; }
  const Outlines& outlines() const { return outlines_; }

  const SpaceRecord* find_space(int id) const;

  // Index cell holding a point anchor.
  Cell anchor_cell(Point2 p) const;
  // Index cells touched by a path segment.
  CellRun path_cells(const PathRecord& path) const;

  CellRecords query_cell(int row, int col) const;

  // Tables (and outlines) compared; the index is derived state.
  bool same_tables(const GridIndexedStore& other) const {
    return spaces_ == other.spaces_ && paths_ == other.paths_ && obstacles_ == other.obstacles_ &&
           outlines_ == other.outlines_;
  }

private:
  struct Bucket {
    std::vector<std::size_t> spaces, paths, obstacles; // positions in the id-sorted tables
  };

  double cell_size_ = 1.0;
  GridSpec index_grid_{{0.0, 0.0}, 1.0, 1.0, 0, 0};
  std::vector<SpaceRecord> spaces_;
  std::vector<PathRecord> paths_;
  std::vector<ObstacleRecord> obstacles_;
  Outlines outlines_;
  std::unordered_map<std::int64_t, Bucket> buckets_; // keyed by row * cols + col; empty cells absent
};

// Applies the transform to every coordinate of every element.
std::vector<MapElement> transform_elements(std::span<const MapElement> elements, const AffineTransform& t);

// Spaces and obstacles keep their element ids and are indexed at their anchors;
// each pathway outline is split into edge segments numbered from 1.
// Throws ConfigError for a non-positive cell size.
GridIndexedStore build_store(std::span<const MapElement> elements, double cell_size,
                             const StoreOptions& options = {});

CellRecords query_cell(const GridIndexedStore& store, int row, int col);

// Closest space anchor, ties to the smaller id. Throws LookupError when nothing matches.
SpaceRecord nearest_space(const GridIndexedStore& store, Point2 p, std::optional<char> type_filter = std::nullopt);

// spaces.csv, paths.csv, obstacles.csv (+ outlines.csv) in `directory`.
void save_store(const GridIndexedStore& store, const std::string& directory);
// Throws LoadError naming the file and line for malformed tables.
GridIndexedStore load_store(const std::string& directory, double cell_size);

struct StoreFiles {
  std::string spaces_csv;
  std::string paths_csv;
  std::string obstacles_csv;
  std::string outlines_csv; // empty when absent
};
StoreFiles serialize_store(const GridIndexedStore& store);
GridIndexedStore deserialize_store(const StoreFiles& files, double cell_size);

std::string emit_sql_ddl(const GridIndexedStore& store);

} // namespace garagemap
