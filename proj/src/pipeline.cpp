#include "garagemap/pipeline.hpp"

#include <algorithm>
#include <filesystem>

#include "garagemap/error.hpp"
#include "garagemap/georef.hpp"

namespace garagemap {

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const SingularFitError*>(&e)) return kExitConfig;
  if (dynamic_cast<const UnreachableError*>(&e)) return kExitUnreachable;
  return kExitInput;
}

namespace {

std::string_view as_text(const std::vector<std::uint8_t>& bytes) {
  return {reinterpret_cast<const char*>(bytes.data()), bytes.size()};
}

std::size_t line_of(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

// Re-raises a parse failure as a LoadError naming the file and line.
template <typename Fn>
auto with_file_context(const std::string& path, const std::vector<std::uint8_t>& bytes, Fn&& fn) {
  try {
    return fn();
  } catch (const FormatError& e) {
    throw LoadError(path, line_of(as_text(bytes), e.offset()), e.what());
  }
}

bool is_netpbm(const std::vector<std::uint8_t>& bytes) {
  return bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] >= '2' && bytes[1] <= '6';
}

} // namespace

RasterizeResult rasterize_image(const RasterGrid& image, const PipelineConfig& cfg) {
  const unsigned threads = static_cast<unsigned>(cfg.threads);
  RasterGrid gray = to_grayscale(image, threads);
  if (cfg.resize_width > 0) gray = resize_nearest(gray, cfg.resize_width, cfg.resize_height);
  BitGrid bits = binarize(gray, static_cast<std::uint8_t>(cfg.threshold), threads);
  return {std::move(gray), std::move(bits)};
}

BitGrid load_bit_grid(const std::string& path, const PipelineConfig& cfg) {
  const auto bytes = read_file_bytes(path);
  return with_file_context(path, bytes, [&] {
    if (is_netpbm(bytes))
      return binarize(load_image(bytes), static_cast<std::uint8_t>(cfg.threshold), static_cast<unsigned>(cfg.threads));
    return parse_bits_text(as_text(bytes));
  });
}

GridIndexedStore store_elements(const std::vector<MapElement>& elements,
                                const std::optional<std::vector<ControlPoint>>& control_points,
                                const PipelineConfig& cfg) {
  if (!control_points) return build_store(elements, cfg.cell_size, cfg.store_options());
  const AffineTransform t = fit_affine(*control_points);
  const auto world = transform_elements(elements, t);
  return build_store(world, cfg.cell_size, cfg.store_options());
}

GridSpec navigation_grid(const GridIndexedStore& store, const PipelineConfig& cfg) {
  if (cfg.grid_rows > 0)
    return GridSpec{{cfg.grid_origin_x, cfg.grid_origin_y}, cfg.grid_cell_dx, cfg.grid_cell_dy, cfg.grid_rows,
                    cfg.grid_cols};
  return covering_grid(store, cfg.grid_cell_dx, cfg.grid_cell_dy);
}

RoutePlan plan_route(const GridIndexedStore& store, const RouteRequest& request, const PipelineConfig& cfg) {
  const int goals = static_cast<int>(request.goal_point.has_value()) + static_cast<int>(request.goal_space.has_value()) +
                    static_cast<int>(request.nearest_space);
  if (goals != 1) throw ConfigError("exactly one of goal point, goal space or nearest space is required");

  const GridSpec g = navigation_grid(store, cfg);
  RoutePlan plan;
  plan.occupancy = build_occupancy(store, g);

  Point2 goal_world{};
  if (request.goal_point) {
    goal_world = *request.goal_point;
  } else {
    SpaceRecord space;
    if (request.nearest_space) {
      space = nearest_space(store, request.start, request.space_type);
    } else {
      const SpaceRecord* found = store.find_space(*request.goal_space);
      if (!found) throw LookupError("no parking space with id " + std::to_string(*request.goal_space));
      space = *found;
    }
    plan.goal_space = space.id;
    plan.occupancy = open_space(plan.occupancy, store, space.id);
    goal_world = {space.x_coordinate, space.y_coordinate};
  }

  Cell start, goal;
  try {
    start = world_to_cell(request.start, g);
    goal = world_to_cell(goal_world, g);
  } catch (const BoundsError& e) {
    throw PlacementError(std::string("route endpoint outside the navigation grid: ") + e.what());
  }
  plan.route = shortest_path(plan.occupancy, start, goal, cfg.connectivity);
  return plan;
}

void run_rasterize(const std::string& image_path, const std::string& out_prefix, const PipelineConfig& cfg) {
  const auto bytes = read_file_bytes(image_path);
  const RasterGrid image = with_file_context(image_path, bytes, [&] { return load_image(bytes); });
  const RasterizeResult r = rasterize_image(image, cfg);
  write_file_bytes(out_prefix + ".gray.pgm", encode_pgm(r.gray));
  write_file_bytes(out_prefix + ".grid.pgm", encode_pgm(bitgrid_to_image(r.bits)));
  write_file_text(out_prefix + ".bits", encode_bits_text(r.bits));
}

void run_vectorize(const std::string& grid_path, const std::string& out_path, const PipelineConfig& cfg) {
  const BitGrid grid = load_bit_grid(grid_path, cfg);
  const auto elements = extract_elements(grid, cfg.extract_params());
  write_file_text(out_path, elements_to_jsonl(elements));
}

void run_store(const std::string& elements_path, const std::optional<std::string>& control_points_path,
               const std::string& out_dir, const std::optional<std::string>& sql_path, const PipelineConfig& cfg) {
  const auto bytes = read_file_bytes(elements_path);
  const auto elements = with_file_context(elements_path, bytes, [&] { return elements_from_jsonl(as_text(bytes)); });
  std::optional<std::vector<ControlPoint>> cps;
  if (control_points_path) {
    const auto cp_bytes = read_file_bytes(*control_points_path);
    cps = with_file_context(*control_points_path, cp_bytes,
                            [&] { return parse_control_points(as_text(cp_bytes), *control_points_path); });
  }
  const GridIndexedStore store = store_elements(elements, cps, cfg);
  std::filesystem::create_directories(out_dir);
  save_store(store, out_dir);
  if (sql_path) write_file_text(*sql_path, emit_sql_ddl(store));
}

RoutePlan run_route(const std::string& store_dir, const RouteRequest& request, const std::string& route_csv_path,
                    const std::optional<std::string>& overlay_path, const PipelineConfig& cfg) {
  const GridIndexedStore store = load_store(store_dir, cfg.cell_size);
  RoutePlan plan = plan_route(store, request, cfg);
  write_file_text(route_csv_path, route_to_csv(plan.route));
  if (overlay_path)
    write_file_bytes(*overlay_path,
                     render_overlay(plan.occupancy, &plan.route, store, cfg.overlay_format, cfg.overlay_scale));
  return plan;
}

void run_render(const std::string& store_dir, const std::optional<std::string>& route_csv_path,
                const std::string& out_path, const PipelineConfig& cfg) {
  const GridIndexedStore store = load_store(store_dir, cfg.cell_size);
  const OccupancyGrid occ = build_occupancy(store, navigation_grid(store, cfg));
  std::optional<Route> route;
  if (route_csv_path) {
    const auto bytes = read_file_bytes(*route_csv_path);
    route = with_file_context(*route_csv_path, bytes, [&] {
      return route_from_csv(as_text(bytes), occ.spec.cell_dx, occ.spec.cell_dy);
    });
    for (const auto& c : route->cells)
      if (!occ.spec.contains(c)) throw BoundsError("route cell outside the navigation grid", c.row, c.col);
  }
  write_file_bytes(out_path, render_overlay(occ, route ? &*route : nullptr, store, cfg.overlay_format,
                                            cfg.overlay_scale));
}

std::string run_ddl(const std::string& store_dir, const PipelineConfig& cfg) {
  return emit_sql_ddl(load_store(store_dir, cfg.cell_size));
}

} // namespace garagemap
