#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "garagemap/georef.hpp"
#include "garagemap/grid_core.hpp"
#include "garagemap/rasterize.hpp"
#include "garagemap/store.hpp"

namespace garagemap {

struct OccupancyGrid {
  BitGrid grid;
  GridSpec spec;

  bool free(Cell c) const { return spec.contains(c) && grid.at(c.row, c.col) == 0; }
};

enum class Heading { N, NE, E, SE, S, SW, W, NW };
enum class Turn { Start, Left, Right, UTurn };

std::string_view to_string(Heading h);
std::string_view to_string(Turn t);

struct Instruction {
  Turn turn = Turn::Start;
  Heading heading = Heading::N;
  double distance = 0.0;

  bool operator==(const Instruction&) const = default;
};

struct Route {
  CellRun cells;
  double length = 0.0;
  std::vector<Instruction> instructions;
  // Step metrics: horizontal moves cost cell_dx, vertical cell_dy, diagonal the hypotenuse.
  double cell_dx = 1.0;
  double cell_dy = 1.0;
};

// Smallest grid aligned to the cell size that covers every stored coordinate.
GridSpec covering_grid(const GridIndexedStore& store, double cell_dx, double cell_dy);

// Obstacles and parking-space footprints occupied, space anchors carved free.
// Throws BoundsError when stored geometry leaves the grid extent.
OccupancyGrid build_occupancy(const GridIndexedStore& store, const GridSpec& g);

// Frees the footprint of one space so a route can enter it. Throws LookupError for an unknown id.
OccupancyGrid open_space(const OccupancyGrid& occ, const GridIndexedStore& store, int space_id);

// Uniform-cost search. Neighbors are expanded N, E, S, W, NE, SE, SW, NW; a
// diagonal step is refused when both flanking orthogonal cells are occupied.
// Throws PlacementError for occupied or off-grid endpoints and
// UnreachableError when no route exists.
Route shortest_path(const OccupancyGrid& occ, Cell start, Cell goal, int connectivity);

// Collinear steps merged into legs; each leg after the first carries the turn
// relative to the previous heading.
std::vector<Instruction> route_instructions(const Route& route);

enum class OverlayFormat { PPM, SVG };
// Throws ConfigError for anything other than "ppm" or "svg" (case-insensitive).
OverlayFormat parse_overlay_format(std::string_view tag);

// Free white, occupied black, space anchors blue, route red. Start/goal get a
// green marker inside their red cell when scale >= 3 (PPM) and always in SVG.
std::vector<std::uint8_t> render_overlay(const OccupancyGrid& occ, const Route* route, const GridIndexedStore& store,
                                         OverlayFormat format, int scale = 1);
std::vector<std::uint8_t> render_overlay(const OccupancyGrid& occ, const Route* route, const GridIndexedStore& store,
                                         std::string_view format, int scale = 1);

// `I,J` per line followed by `length,<value>`.
std::string route_to_csv(const Route& route);
Route route_from_csv(std::string_view text, double cell_dx = 1.0, double cell_dy = 1.0);

} // namespace garagemap
