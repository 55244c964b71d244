#pragma once

#include <array>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace garagemap {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Point2&) const = default;
};

// Four vertices p1..p4 in consistent winding order.
struct Quad {
  std::array<Point2, 4> vertices{};

  bool operator==(const Quad&) const = default;
};

// x' = a*x + b*y + c ; y' = d*x + e*y + f
struct AffineTransform {
  double a = 1.0, b = 0.0, c = 0.0;
  double d = 0.0, e = 1.0, f = 0.0;

  static AffineTransform identity() { return {}; }
  double determinant() const { return a * e - b * d; }

  bool operator==(const AffineTransform&) const = default;
};

// Grid cell index. Row grows downward from the top-left origin, column grows rightward.
struct Cell {
  int row = 0;
  int col = 0;

  auto operator<=>(const Cell&) const = default;
};

// Binds a rows x cols cell lattice to world coordinates. `origin` is the
// top-left corner; world y decreases downward.
struct GridSpec {
  Point2 origin{};
  double cell_dx = 1.0;
  double cell_dy = 1.0;
  int rows = 1;
  int cols = 1;

  // Frame used for vectorized output: one unit per pixel, origin at (0, height),
  // so x = column and y = height - row.
  static GridSpec for_raster(int width, int height);

  // Throws ConfigError if a field is out of range.
  void validate() const;
  bool contains(Cell c) const { return c.row >= 0 && c.col >= 0 && c.row < rows && c.col < cols; }
  // World position of a cell-lattice corner (col units right, row units down).
  Point2 lattice_to_world(double col, double row) const {
    return {origin.x + col * cell_dx, origin.y - row * cell_dy};
  }

  bool operator==(const GridSpec&) const = default;
};

struct ControlPoint {
  Point2 pixel;
  Point2 world;
};

// Which side of the directed edge a->b the point p lies on:
// (b.x - a.x)(p.y - a.y) - (p.x - a.x)(b.y - a.y).
double edge_cross(Point2 a, Point2 b, Point2 p);

// Boundary-inclusive containment: the cross products over the four directed
// edges all share a sign (or vanish). Throws GeometryError for a zero-area quad.
bool point_in_quad(const Quad& q, Point2 p);

Point2 quad_center(const Quad& q);

// Least-squares affine fit, one 3-parameter system per output axis.
// Throws ArityError for fewer than 3 pairs and SingularFitError when the pixel
// points are (nearly) collinear.
AffineTransform fit_affine(std::span<const ControlPoint> pairs);

Point2 apply_affine(const AffineTransform& t, Point2 p);

// Throws BoundsError (carrying the computed index) when p is off the grid.
Cell world_to_cell(Point2 p, const GridSpec& g);
// Center of the cell. Throws BoundsError for an out-of-range index.
Point2 cell_to_world(Cell c, const GridSpec& g);

// Control-point CSV: header `px,py,wx,wy`, one pair per line.
std::vector<ControlPoint> parse_control_points(std::string_view csv, std::string_view name = "control points");

} // namespace garagemap
