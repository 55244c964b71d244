// garagemap: image -> grid -> elements -> tables -> routes.

#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "garagemap/error.hpp"
#include "garagemap/pipeline.hpp"

namespace {

using namespace garagemap;

struct ConfigFlags {
  std::string config_path;
  std::map<std::string, std::string> overrides;
};

void add_config_flags(CLI::App* cmd, ConfigFlags& flags) {
  cmd->add_option("--config", flags.config_path, "key = value config file");
  for (const auto& key : config_keys()) {
    std::string dashed = key;
    for (auto& ch : dashed)
      if (ch == '_') ch = '-';
    const std::string names = "--" + key + (dashed != key ? ",--" + dashed : "");
    cmd->add_option_function<std::string>(
        names, [&flags, key](const std::string& v) { flags.overrides[key] = v; }, "overrides config key " + key);
  }
}

PipelineConfig resolve_config(const ConfigFlags& flags) {
  PipelineConfig cfg = flags.config_path.empty() ? PipelineConfig{} : load_config(flags.config_path);
  for (const auto& [key, value] : flags.overrides) cfg.set(key, value);
  cfg.validate();
  return cfg;
}

Point2 parse_point(const std::string& text, const char* what) {
  const auto comma = text.find(',');
  try {
    if (comma == std::string::npos) throw std::invalid_argument("no comma");
    std::size_t used_x = 0, used_y = 0;
    const double x = std::stod(text.substr(0, comma), &used_x);
    const double y = std::stod(text.substr(comma + 1), &used_y);
    if (used_x != comma || used_y != text.size() - comma - 1) throw std::invalid_argument("trailing text");
    return {x, y};
  } catch (const std::logic_error&) {
    throw Error(std::string(what) + ": expected X,Y but got '" + text + "'");
  }
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parking-garage map builder and router"};
  app.require_subcommand(1);

  ConfigFlags flags;

  std::string input, output;
  auto* rasterize = app.add_subcommand("rasterize", "Grayscale + binary grid from a PGM/PPM image");
  rasterize->add_option("image", input, "input PGM or PPM")->required();
  rasterize->add_option("-o,--out", output, "output prefix (.gray.pgm, .grid.pgm, .bits)")->required();
  add_config_flags(rasterize, flags);

  auto* vectorize = app.add_subcommand("vectorize", "Map elements (JSON lines) from a binary grid");
  vectorize->add_option("grid", input, ".bits text or PGM grid")->required();
  vectorize->add_option("-o,--out", output, "elements JSON-lines file")->required();
  add_config_flags(vectorize, flags);

  std::string control_points, sql;
  auto* store = app.add_subcommand("store", "Classified CSV tables from map elements");
  store->add_option("elements", input, "elements JSON-lines file")->required();
  store->add_option("-o,--out", output, "output directory")->required();
  store->add_option("--control-points", control_points, "CSV px,py,wx,wy for the pixel-to-world fit");
  store->add_option("--sql", sql, "also write SQL DDL + inserts to this file");
  add_config_flags(store, flags);

  std::string start, goal, overlay, space_type;
  int goal_space = -1;
  bool nearest = false;
  auto* route = app.add_subcommand("route", "Shortest route over a stored map");
  route->add_option("store", input, "store directory")->required();
  route->add_option("--start", start, "start world point X,Y")->required();
  auto* goal_opt = route->add_option("--goal", goal, "goal world point X,Y");
  auto* space_opt = route->add_option("--goal-space", goal_space, "goal parking-space id");
  auto* nearest_opt = route->add_flag("--nearest-space", nearest, "route to the nearest parking space");
  route->add_option("--space-type", space_type, "space type filter for --nearest-space (S, L or N)")
      ->check(CLI::IsMember({"S", "L", "N"}));
  goal_opt->excludes(space_opt)->excludes(nearest_opt);
  space_opt->excludes(nearest_opt);
  route->add_option("-o,--out", output, "route CSV")->required();
  route->add_option("--overlay", overlay, "overlay image (format from overlay_format)");
  add_config_flags(route, flags);

  std::string route_csv;
  auto* render = app.add_subcommand("render", "Overlay image of a stored map");
  render->add_option("store", input, "store directory")->required();
  render->add_option("--route", route_csv, "route CSV to draw");
  render->add_option("-o,--out", output, "output image")->required();
  add_config_flags(render, flags);

  auto* ddl = app.add_subcommand("ddl", "SQL DDL + inserts for a stored map");
  ddl->add_option("store", input, "store directory")->required();
  ddl->add_option("-o,--out", output, "output file (stdout when omitted)");
  add_config_flags(ddl, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    const PipelineConfig cfg = resolve_config(flags);
    auto optional_path = [](const std::string& s) { return s.empty() ? std::nullopt : std::optional<std::string>(s); };

    if (rasterize->parsed()) {
      run_rasterize(input, output, cfg);
    } else if (vectorize->parsed()) {
      run_vectorize(input, output, cfg);
    } else if (store->parsed()) {
      run_store(input, optional_path(control_points), output, optional_path(sql), cfg);
    } else if (route->parsed()) {
      RouteRequest req;
      req.start = parse_point(start, "--start");
      if (!goal.empty()) req.goal_point = parse_point(goal, "--goal");
      if (space_opt->count() > 0) req.goal_space = goal_space;
      req.nearest_space = nearest;
      if (!space_type.empty()) req.space_type = space_type[0];
      if (!req.goal_point && !req.goal_space && !req.nearest_space)
        throw Error("route needs one of --goal, --goal-space or --nearest-space");
      const RoutePlan plan = run_route(input, req, output, optional_path(overlay), cfg);
      std::cout << std::setprecision(17) << "length " << plan.route.length << '\n';
      for (const auto& ins : plan.route.instructions)
        std::cout << to_string(ins.turn) << ' ' << to_string(ins.heading) << ' ' << ins.distance << '\n';
    } else if (render->parsed()) {
      run_render(input, optional_path(route_csv), output, cfg);
    } else if (ddl->parsed()) {
      const std::string text = run_ddl(input, cfg);
      if (output.empty()) std::cout << text;
      else write_file_text(output, text);
    }
  } catch (const std::exception& e) {
    std::cerr << "garagemap: " << e.what() << '\n';
    return exit_code_for(e);
  }
  return kExitOk;
}
