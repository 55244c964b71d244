#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "garagemap/georef.hpp"
#include "garagemap/grid_core.hpp"

namespace garagemap {

// Component labels, row-major. 0 = not part of any component; ids run 1..count
// in the order a raster scan first meets each component.
struct LabelGrid {
  int width = 0;
  int height = 0;
  int connectivity = 4;
  int count = 0;
  std::vector<std::int32_t> labels;

  std::int32_t at(int row, int col) const {
    return labels[static_cast<std::size_t>(row) * width + col];
  }
};

// Implicitly closed ring.
struct Polygon {
  std::vector<Point2> vertices;

  std::size_t size() const { return vertices.size(); }
  bool operator==(const Polygon&) const = default;
};

struct PolygonMetrics {
  double perimeter = 0.0;
  double area = 0.0;
};

enum class ElementKind { ParkingSpace, Pathway, Obstacle };

std::string_view to_string(ElementKind kind);
ElementKind element_kind_from_string(std::string_view text);

struct MapElement {
  int id = 0;
  ElementKind kind = ElementKind::Obstacle;
  Polygon geometry;
  std::optional<Quad> corners; // parking spaces only
  Point2 anchor;

  bool operator==(const MapElement&) const = default;
};

struct RectangleParams {
  double angle_tol_deg = 10.0;
  double min_area = 0.0;
  double max_area = std::numeric_limits<double>::infinity();
  double min_perimeter = 0.0;
  double max_perimeter = std::numeric_limits<double>::infinity();
  // The 4-corner reduction must keep at least this share of the hull's area.
  double min_coverage = 0.8;
};

struct ExtractParams {
  RectangleParams rectangle;
  // Cells whose centers fall inside a space's fitted rectangle, over the
  // larger of the cell area and the rectangle area, must reach this ratio.
  double min_fill = 0.9;
  // Douglas-Peucker tolerance for pathway outlines, in cell units.
  double simplify_epsilon = 1.0;
  unsigned threads = 1;
};

LabelGrid connected_components(const BitGrid& grid, std::uint8_t target, int connectivity);

// Outer boundary of a component as a pixel-edge ring in lattice coordinates
// (x = column, y = row, corners at integers). Starts at the top-left corner of
// the first scanned cell and runs clockwise on screen; collinear runs are merged.
// Throws LookupError for an unknown id.
Polygon trace_contour(const LabelGrid& lg, int id);

// Douglas-Peucker on the closed ring; keeps original vertex order.
Polygon simplify_polygon(const Polygon& poly, double epsilon);

// Counter-clockwise hull starting at the lexicographically smallest point,
// collinear points dropped. Throws GeometryError when all points are collinear.
Polygon convex_hull(std::span<const Point2> points);

PolygonMetrics polygon_metrics(const Polygon& poly);
double signed_area(const Polygon& poly);
Point2 polygon_centroid(const Polygon& poly);
// Boundary-inclusive point-in-polygon for simple rings.
bool point_in_polygon(const Polygon& poly, Point2 p);

// Reduces a convex hull to its largest-area inscribed quadrilateral and accepts
// it when every corner is within tolerance of 90 degrees and the hull's
// metrics fall inside the configured bounds.
std::optional<Quad> detect_rectangle(const Polygon& hull, const RectangleParams& params);

// Full raster-to-vector pass. Free cells (4-connected) become pathways,
// occupied blobs (8-connected) become parking spaces or obstacles. A space's
// corners are the detected hull quad refined by fitting a line to the contour
// along each side. Geometry is
// expressed in `frame` world coordinates; ids follow raster-scan order.
std::vector<MapElement> extract_elements(const BitGrid& grid, const ExtractParams& params,
                                         const GridSpec& frame);
std::vector<MapElement> extract_elements(const BitGrid& grid, const ExtractParams& params);

// JSON lines, one element per line with keys id, kind, anchor, corners, polygon.
std::string elements_to_jsonl(std::span<const MapElement> elements);
std::vector<MapElement> elements_from_jsonl(std::string_view text);

} // namespace garagemap
