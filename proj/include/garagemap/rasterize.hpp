#pragma once

#include <span>
#include <vector>

#include "garagemap/georef.hpp"
#include "garagemap/grid_core.hpp"
#include "garagemap/vectorize.hpp"

namespace garagemap {

using CellRun = std::vector<Cell>;

struct Sample {
  Point2 location;
  double value = 0.0;
};

Cell rasterize_point(Point2 p, const GridSpec& g);

// One cell per column for shallow lines (|dcol| >= |drow|, diagonals included),
// one per row for steep ones; the off-axis index is rounded half up.
CellRun line_eight_direction(Cell from, Cell to);

// Supercover of the segment joining the two cell centers: every cell whose
// closed square the segment touches, walked row strip by row strip from
// `from` to `to`. Exact integer arithmetic.
CellRun line_full_path(Cell from, Cell to);

// Supercover of an arbitrary world segment on grid `g`, clipped to the grid.
CellRun segment_cells(Point2 from, Point2 to, const GridSpec& g);

// Lattice points origin + (m*interval_x, n*interval_y) inside the polygon
// (boundary inclusive), row-major from the bounding box's minimum corner.
std::vector<Point2> polygon_grid_sample(const Polygon& poly, double interval_x, double interval_y,
                                        Point2 origin);

// Cells whose center lies inside the polygon, row-major. Cells off the grid are skipped.
CellRun polygon_fill(const Polygon& poly, const GridSpec& g);

// Cells covered by an element outline: polygon fill for rings, the segment
// supercover for two-vertex outlines, the containing cell for a single point.
CellRun footprint_cells(const Polygon& outline, const GridSpec& g);

// Inverse distance weighting. Throws ArityError for an empty sample list.
double idw_interpolate(std::span<const Sample> samples, Point2 query, double power);

// Grid with every parking-space and obstacle footprint set to 1. Throws
// BoundsError naming the element when its geometry leaves the grid extent.
BitGrid raster_from_elements(std::span<const MapElement> elements, const GridSpec& g);

} // namespace garagemap
