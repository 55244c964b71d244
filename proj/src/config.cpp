#include "garagemap/config.hpp"

#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <set>

#include "garagemap/error.hpp"
#include "garagemap/grid_core.hpp"
#include "garagemap/nav.hpp"

namespace garagemap {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

int parse_int(std::string_view key, std::string_view v) {
  int out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size())
    throw ConfigError(std::string(key) + ": expected an integer, got '" + std::string(v) + "'");
  return out;
}

double parse_double(std::string_view key, std::string_view v) {
  if (v == "inf" || v == "+inf") return std::numeric_limits<double>::infinity();
  double out = 0.0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size() || std::isnan(out))
    throw ConfigError(std::string(key) + ": expected a number, got '" + std::string(v) + "'");
  return out;
}

using Setter = std::function<void(PipelineConfig&, std::string_view key, std::string_view value)>;

template <typename T>
Setter field(T PipelineConfig::*member) {
  return [member](PipelineConfig& c, std::string_view key, std::string_view value) {
    if constexpr (std::is_same_v<T, int>) c.*member = parse_int(key, value);
    else if constexpr (std::is_same_v<T, double>) c.*member = parse_double(key, value);
    else c.*member = std::string(value);
  };
}

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table{
      {"threshold", field(&PipelineConfig::threshold)},
      {"resize_width", field(&PipelineConfig::resize_width)},
      {"resize_height", field(&PipelineConfig::resize_height)},
      {"threads", field(&PipelineConfig::threads)},
      {"angle_tol_deg", field(&PipelineConfig::angle_tol_deg)},
      {"space_min_area", field(&PipelineConfig::space_min_area)},
      {"space_max_area", field(&PipelineConfig::space_max_area)},
      {"space_min_perimeter", field(&PipelineConfig::space_min_perimeter)},
      {"space_max_perimeter", field(&PipelineConfig::space_max_perimeter)},
      {"min_fill", field(&PipelineConfig::min_fill)},
      {"min_coverage", field(&PipelineConfig::min_coverage)},
      {"simplify_epsilon", field(&PipelineConfig::simplify_epsilon)},
      {"cell_size", field(&PipelineConfig::cell_size)},
      {"large_space_min_area", field(&PipelineConfig::large_space_min_area)},
      {"pillar_max_area", field(&PipelineConfig::pillar_max_area)},
      {"idw_power", field(&PipelineConfig::idw_power)},
      {"connectivity", field(&PipelineConfig::connectivity)},
      {"grid_origin_x", field(&PipelineConfig::grid_origin_x)},
      {"grid_origin_y", field(&PipelineConfig::grid_origin_y)},
      {"grid_cell_dx", field(&PipelineConfig::grid_cell_dx)},
      {"grid_cell_dy", field(&PipelineConfig::grid_cell_dy)},
      {"grid_rows", field(&PipelineConfig::grid_rows)},
      {"grid_cols", field(&PipelineConfig::grid_cols)},
      {"overlay_format", field(&PipelineConfig::overlay_format)},
      {"overlay_scale", field(&PipelineConfig::overlay_scale)},
  };
  return table;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

} // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> out;
    for (const auto& [k, _] : setters()) out.push_back(k);
    return out;
  }();
  return keys;
}

void PipelineConfig::set(std::string_view key, std::string_view value) {
  const auto it = setters().find(key);
  if (it == setters().end()) throw ConfigError("unknown config key '" + std::string(key) + "'");
  it->second(*this, key, value);
}

void PipelineConfig::validate() const {
  require(threshold >= 0 && threshold <= 255, "threshold must be in [0, 255]");
  require(resize_width >= 0 && resize_height >= 0, "resize dimensions must be non-negative");
  require((resize_width == 0) == (resize_height == 0), "resize_width and resize_height must be set together");
  require(threads >= 1 && threads <= 256, "threads must be in [1, 256]");
  require(angle_tol_deg > 0.0 && angle_tol_deg <= 45.0, "angle_tol_deg must be in (0, 45]");
  require(space_min_area >= 0.0 && space_max_area >= space_min_area, "space area bounds must satisfy 0 <= min <= max");
  require(space_min_perimeter >= 0.0 && space_max_perimeter >= space_min_perimeter,
          "space perimeter bounds must satisfy 0 <= min <= max");
  require(min_fill >= 0.0 && min_fill <= 1.0, "min_fill must be in [0, 1]");
  require(min_coverage >= 0.0 && min_coverage <= 1.0, "min_coverage must be in [0, 1]");
  require(simplify_epsilon >= 0.0 && std::isfinite(simplify_epsilon), "simplify_epsilon must be finite and >= 0");
  require(cell_size > 0.0 && std::isfinite(cell_size), "cell_size must be positive");
  require(large_space_min_area >= 0.0, "large_space_min_area must be >= 0");
  require(pillar_max_area >= 0.0, "pillar_max_area must be >= 0");
  require(idw_power > 0.0 && std::isfinite(idw_power), "idw_power must be positive");
  require(connectivity == 4 || connectivity == 8, "connectivity must be 4 or 8");
  require(std::isfinite(grid_origin_x) && std::isfinite(grid_origin_y), "grid origin must be finite");
  require(grid_cell_dx > 0.0 && grid_cell_dy > 0.0 && std::isfinite(grid_cell_dx) && std::isfinite(grid_cell_dy),
          "grid cell dimensions must be positive");
  require(grid_rows >= 0 && grid_cols >= 0, "grid_rows and grid_cols must be >= 0");
  require((grid_rows == 0) == (grid_cols == 0), "grid_rows and grid_cols must be set together");
  require(overlay_scale >= 1 && overlay_scale <= 64, "overlay_scale must be in [1, 64]");
  parse_overlay_format(overlay_format);
}

ExtractParams PipelineConfig::extract_params() const {
  ExtractParams p;
  p.rectangle.angle_tol_deg = angle_tol_deg;
  p.rectangle.min_area = space_min_area;
  p.rectangle.max_area = space_max_area;
  p.rectangle.min_perimeter = space_min_perimeter;
  p.rectangle.max_perimeter = space_max_perimeter;
  p.rectangle.min_coverage = min_coverage;
  p.min_fill = min_fill;
  p.simplify_epsilon = simplify_epsilon;
  p.threads = static_cast<unsigned>(threads);
  return p;
}

StoreOptions PipelineConfig::store_options() const {
  return StoreOptions{large_space_min_area, pillar_max_area};
}

PipelineConfig parse_config(std::string_view text, std::string_view source) {
  PipelineConfig cfg;
  std::set<std::string, std::less<>> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto where = std::string(source) + ":" + std::to_string(line_no) + ": ";
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where + "expected key = value");
    const auto key = trim(line.substr(0, eq));
    auto value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    if (!seen.insert(std::string(key)).second) throw ConfigError(where + "duplicate key '" + std::string(key) + "'");
    try {
      cfg.set(key, value);
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }
  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(std::string(source) + ": " + e.what());
  }
  return cfg;
}

PipelineConfig load_config(const std::string& path) {
  std::vector<std::uint8_t> bytes;
  try {
    bytes = read_file_bytes(path);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  return parse_config(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()), path);
}

} // namespace garagemap
