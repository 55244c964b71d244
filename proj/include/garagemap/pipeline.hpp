#pragma once

#include <exception>
#include <optional>
#include <string>
#include <vector>

#include "garagemap/config.hpp"
#include "garagemap/grid_core.hpp"
#include "garagemap/nav.hpp"
#include "garagemap/store.hpp"
#include "garagemap/vectorize.hpp"

namespace garagemap {

// Process exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitInput = 2, kExitConfig = 3, kExitUnreachable = 4 };
int exit_code_for(const std::exception& e);

struct RasterizeResult {
  RasterGrid gray;
  BitGrid bits;
};
RasterizeResult rasterize_image(const RasterGrid& image, const PipelineConfig& cfg);

// Reads a `.bits` text matrix, or a Netpbm image binarized at cfg.threshold.
BitGrid load_bit_grid(const std::string& path, const PipelineConfig& cfg);

// Applies the control-point fit (when given) and classifies into tables.
GridIndexedStore store_elements(const std::vector<MapElement>& elements,
                                const std::optional<std::vector<ControlPoint>>& control_points,
                                const PipelineConfig& cfg);

// Explicit grid from the config, or one derived from the store's extent.
GridSpec navigation_grid(const GridIndexedStore& store, const PipelineConfig& cfg);

struct RouteRequest {
  Point2 start;
  std::optional<Point2> goal_point;
  std::optional<int> goal_space;
  bool nearest_space = false;
  std::optional<char> space_type; // filter for nearest_space
};

struct RoutePlan {
  OccupancyGrid occupancy; // with the goal space opened, if any
  Route route;
  std::optional<int> goal_space;
};
RoutePlan plan_route(const GridIndexedStore& store, const RouteRequest& request, const PipelineConfig& cfg);

// File-level steps used by the command-line tool. Errors carry the input path.
void run_rasterize(const std::string& image_path, const std::string& out_prefix, const PipelineConfig& cfg);
void run_vectorize(const std::string& grid_path, const std::string& out_path, const PipelineConfig& cfg);
void run_store(const std::string& elements_path, const std::optional<std::string>& control_points_path,
               const std::string& out_dir, const std::optional<std::string>& sql_path, const PipelineConfig& cfg);
RoutePlan run_route(const std::string& store_dir, const RouteRequest& request, const std::string& route_csv_path,
                    const std::optional<std::string>& overlay_path, const PipelineConfig& cfg);
void run_render(const std::string& store_dir, const std::optional<std::string>& route_csv_path,
                const std::string& out_path, const PipelineConfig& cfg);
std::string run_ddl(const std::string& store_dir, const PipelineConfig& cfg);

} // namespace garagemap
