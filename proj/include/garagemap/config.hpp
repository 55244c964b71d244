#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "garagemap/georef.hpp"
#include "garagemap/store.hpp"
#include "garagemap/vectorize.hpp"

namespace garagemap {

// Every tunable of the pipeline. Loaded from flat `key = value` text; see
// config_keys() for the accepted names.
struct PipelineConfig {
  // rasterize
  int threshold = 128;
  int resize_width = 0;  // 0 keeps the source size
  int resize_height = 0;
  int threads = 1;

  // vectorize
  double angle_tol_deg = 10.0;
  double space_min_area = 0.0;
  double space_max_area = std::numeric_limits<double>::infinity();
  double space_min_perimeter = 0.0;
  double space_max_perimeter = std::numeric_limits<double>::infinity();
  double min_fill = 0.9;
  double min_coverage = 0.8;
  double simplify_epsilon = 1.0;

  // store
  double cell_size = 1.0;
  double large_space_min_area = std::numeric_limits<double>::infinity();
  double pillar_max_area = 0.0;

  // interpolation
  double idw_power = 2.0;

  // navigation grid; rows/cols of 0 derive the grid from the stored geometry
  int connectivity = 8;
  double grid_origin_x = 0.0;
  double grid_origin_y = 0.0;
  double grid_cell_dx = 1.0;
  double grid_cell_dy = 1.0;
  int grid_rows = 0;
  int grid_cols = 0;

  // overlay
  std::string overlay_format = "ppm";
  int overlay_scale = 1;

  // Parses and assigns one key. Throws ConfigError for unknown keys or bad values.
  void set(std::string_view key, std::string_view value);
  // Range checks across all fields. Throws ConfigError.
  void validate() const;

  ExtractParams extract_params() const;
  StoreOptions store_options() const;
};

const std::vector<std::string>& config_keys();

// Blank lines and `#` comments are skipped; values may be double-quoted.
// Errors name the source and line. The result is validated.
PipelineConfig parse_config(std::string_view text, std::string_view source = "config");
PipelineConfig load_config(const std::string& path);

} // namespace garagemap
