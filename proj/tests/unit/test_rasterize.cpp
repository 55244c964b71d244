#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "garagemap/error.hpp"
#include "garagemap/rasterize.hpp"
#include "line_oracle.hpp"
#include "synthetic.hpp"

using namespace garagemap;

namespace {

std::set<Cell> as_set(const CellRun& run) { return {run.begin(), run.end()}; }

bool adjacent8(Cell a, Cell b) { return std::max(std::abs(a.row - b.row), std::abs(a.col - b.col)) == 1; }

} // namespace

TEST_CASE("rasterize_point delegates to world_to_cell") {
  const GridSpec g{{0, 10}, 1, 1, 10, 10};
  CHECK(rasterize_point({3.5, 7.5}, g) == Cell{2, 3});
  CHECK(rasterize_point({3.0, 7.0}, g) == Cell{3, 3});
  CHECK_THROWS_AS(rasterize_point({-1, 5}, g), BoundsError);
}

TEST_CASE("line_eight_direction examples") {
  CHECK(line_eight_direction({0, 0}, {0, 3}) == CellRun{{0, 0}, {0, 1}, {0, 2}, {0, 3}});
  CHECK(line_eight_direction({0, 0}, {3, 3}) == CellRun{{0, 0}, {1, 1}, {2, 2}, {3, 3}});
  CHECK(line_eight_direction({0, 0}, {1, 3}) == CellRun{{0, 0}, {0, 1}, {1, 2}, {1, 3}});
  CHECK(line_eight_direction({4, 4}, {4, 4}) == CellRun{{4, 4}});
}

TEST_CASE("line_eight_direction per-axis rounding oracle (exhaustive 10x10)") {
  for (int a = 0; a < 100; ++a)
    for (int b = 0; b < 100; ++b) {
      const Cell c0{a / 10, a % 10}, c1{b / 10, b % 10};
      const auto run = line_eight_direction(c0, c1);
      const int di = c1.row - c0.row, dj = c1.col - c0.col;
      const int n = std::max(std::abs(di), std::abs(dj));
      REQUIRE(run.size() == static_cast<std::size_t>(n) + 1);
      REQUIRE(run.front() == c0);
      REQUIRE(run.back() == c1);
      for (int k = 0; k <= n && n > 0; ++k) {
        Cell expect;
        if (std::abs(dj) >= std::abs(di)) {
          const int j = c0.col + k * (dj > 0 ? 1 : -1);
          expect = {static_cast<int>(std::floor(c0.row + (j - c0.col) * double(di) / dj + 0.5)), j};
        } else {
          const int i = c0.row + k * (di > 0 ? 1 : -1);
          expect = {i, static_cast<int>(std::floor(c0.col + (i - c0.row) * double(dj) / di + 0.5))};
        }
        REQUIRE(run[k] == expect);
      }
      for (std::size_t k = 1; k < run.size(); ++k) REQUIRE(adjacent8(run[k - 1], run[k]));
    }
}

TEST_CASE("line_full_path examples") {
  CHECK(line_full_path({0, 0}, {0, 3}) == CellRun{{0, 0}, {0, 1}, {0, 2}, {0, 3}});
  CHECK(as_set(line_full_path({0, 0}, {1, 2})) == std::set<Cell>{{0, 0}, {0, 1}, {1, 1}, {1, 2}});
  CHECK(as_set(line_full_path({0, 0}, {2, 2})) ==
        std::set<Cell>{{0, 0}, {0, 1}, {1, 0}, {1, 1}, {1, 2}, {2, 1}, {2, 2}});
}

TEST_CASE("line_full_path against the closed-square oracle (exhaustive 8x8)") {
  for (int a = 0; a < 64; ++a)
    for (int b = 0; b < 64; ++b) {
      const Cell c0{a / 8, a % 8}, c1{b / 8, b % 8};
      const auto run = line_full_path(c0, c1);
      std::set<Cell> oracle;
      for (int r = 0; r < 8; ++r)
        for (int c = 0; c < 8; ++c)
          if (line_oracle::segment_touches_cell(c0, c1, r, c)) oracle.insert({r, c});
      const auto got = as_set(run);
      REQUIRE(got.size() == run.size());
      REQUIRE(got == oracle);
      REQUIRE(run.front() == c0);
      REQUIRE(run.back() == c1);
      for (std::size_t k = 1; k < run.size(); ++k) REQUIRE(adjacent8(run[k - 1], run[k]));
      for (const auto& c : line_eight_direction(c0, c1)) REQUIRE(got.count(c) == 1);
      REQUIRE(as_set(line_full_path(c1, c0)) == got);
      REQUIRE(as_set(line_eight_direction(c1, c0)).size() == line_eight_direction(c0, c1).size());
    }
}

TEST_CASE("segment_cells agrees with line_full_path on cell centers and clips to the grid") {
  const GridSpec g{{-2.0, 3.0}, 0.5, 0.25, 12, 9};
  for (int a = 0; a < 108; a += 5)
    for (int b = 0; b < 108; b += 3) {
      const Cell c0{a / 9, a % 9}, c1{b / 9, b % 9};
      REQUIRE(as_set(segment_cells(cell_to_world(c0, g), cell_to_world(c1, g), g)) == as_set(line_full_path(c0, c1)));
    }
  const GridSpec unit{{0, 4}, 1, 1, 4, 4};
  const auto clipped = segment_cells({-3, 3.5}, {10, 3.5}, unit);
  CHECK(clipped == CellRun{{0, 0}, {0, 1}, {0, 2}, {0, 3}});
  CHECK(segment_cells({-3, -3}, {-1, -1}, unit).empty());
}

TEST_CASE("polygon_grid_sample") {
  const Polygon sq{{{0, 0}, {2, 0}, {2, 2}, {0, 2}}};
  CHECK(polygon_grid_sample(sq, 1, 1, {0, 0}).size() == 9);
  const Polygon thin{{{0.2, 0.2}, {0.8, 0.2}, {0.8, 0.8}, {0.2, 0.8}}};
  CHECK(polygon_grid_sample(thin, 1, 1, {0, 0}).empty());
  CHECK(polygon_grid_sample(Polygon{{{0, 0}, {1, 1}, {2, 2}}}, 1, 1, {0, 0}).empty());

  std::mt19937_64 rng(44);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int i = 0; i < 100; ++i) {
    std::vector<Point2> pts;
    for (int k = 0; k < 8; ++k) pts.push_back({u(rng), u(rng)});
    Polygon hull;
    try {
      hull = convex_hull(pts);
    } catch (const GeometryError&) {
      continue;
    }
    const double ix = 0.3 + (rng() % 10) / 10.0, iy = 0.3 + (rng() % 10) / 10.0;
    const Point2 origin{u(rng), u(rng)};
    std::size_t oracle = 0;
    for (int n = -200; n <= 200; ++n)
      for (int m = -200; m <= 200; ++m)
        oracle += synthetic::inside_oracle(hull, {origin.x + m * ix, origin.y + n * iy});
    REQUIRE(polygon_grid_sample(hull, ix, iy, origin).size() == oracle);

    // Translating polygon and origin together translates the samples.
    Polygon moved = hull;
    for (auto& v : moved.vertices) v = {v.x + 4 * ix, v.y - 3 * iy};
    const auto base = polygon_grid_sample(hull, ix, iy, origin);
    const auto shifted = polygon_grid_sample(moved, ix, iy, {origin.x + 4 * ix, origin.y - 3 * iy});
    REQUIRE(base.size() == shifted.size());
  }
}

TEST_CASE("polygon_fill") {
  const GridSpec g{{0, 4}, 1, 1, 4, 4};
  const Polygon cells{{{0, 2}, {2, 2}, {2, 4}, {0, 4}}};
  CHECK(polygon_fill(cells, g) == CellRun{{0, 0}, {0, 1}, {1, 0}, {1, 1}});
  const Polygon tiny{{{0.1, 0.1}, {0.4, 0.1}, {0.4, 0.4}, {0.1, 0.4}}};
  CHECK(polygon_fill(tiny, g).empty());

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0, 1);
  const GridSpec big{{-10, 10}, 0.5, 0.5, 40, 40};
  for (int i = 0; i < 300; ++i) {
    const double w = 1 + 8 * u(rng), h = 1 + 8 * u(rng);
    const auto rect = synthetic::rect_polygon(-10 + 20 * u(rng), -10 + 20 * u(rng), w, h, 6.3 * u(rng));
    const auto run = polygon_fill(rect, big);
    std::set<Cell> oracle;
    for (int r = 0; r < big.rows; ++r)
      for (int c = 0; c < big.cols; ++c)
        if (synthetic::inside_oracle(rect, cell_to_world({r, c}, big))) oracle.insert({r, c});
    REQUIRE(as_set(run) == oracle);
    REQUIRE(std::is_sorted(run.begin(), run.end()));
    // Analytic bound for convex shapes fully inside the grid.
    bool inside_grid = true;
    for (const auto& v : rect.vertices) inside_grid &= std::abs(v.x) < 10 && std::abs(v.y) < 10;
    if (inside_grid) {
      const double expected = w * h / 0.25;
      const double slack = 2 * (w + h) / 0.5;
      REQUIRE(std::abs(static_cast<double>(run.size()) - expected) <= slack);
    }
  }
}

TEST_CASE("footprint_cells by outline arity") {
  const GridSpec g{{0, 4}, 1, 1, 4, 4};
  CHECK(footprint_cells(Polygon{{{1.5, 1.5}}}, g) == CellRun{{2, 1}});
  CHECK(as_set(footprint_cells(Polygon{{{0.5, 3.5}, {3.5, 3.5}}}, g)) == std::set<Cell>{{0, 0}, {0, 1}, {0, 2}, {0, 3}});
  CHECK(footprint_cells(Polygon{{{0, 0}, {4, 0}, {4, 4}, {0, 4}}}, g).size() == 16);
  CHECK(footprint_cells(Polygon{}, g).empty());
}

TEST_CASE("idw_interpolate") {
  const std::vector<Sample> two{{{0, 0}, 10}, {{2, 0}, 20}};
  for (double p : {0.5, 1.0, 2.0, 7.0}) CHECK(idw_interpolate(two, {1, 0}, p) == doctest::Approx(15).epsilon(1e-12));
  CHECK(idw_interpolate(two, {2, 0}, 2) == 20.0);
  const std::vector<Sample> lin{{{0, 0}, 0}, {{4, 0}, 8}};
  CHECK(idw_interpolate(lin, {1, 0}, 1) == doctest::Approx(2).epsilon(1e-12));
  CHECK_THROWS_AS(idw_interpolate(std::vector<Sample>{}, {0, 0}, 2), ArityError);

  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> u(-50, 50);
  for (int t = 0; t < 200; ++t) {
    std::vector<Sample> s;
    for (int k = 0; k < 6; ++k) s.push_back({{u(rng), u(rng)}, u(rng)});
    double lo = 1e300, hi = -1e300;
    for (const auto& x : s) {
      lo = std::min(lo, x.value);
      hi = std::max(hi, x.value);
    }
    for (const auto& x : s) REQUIRE(idw_interpolate(s, x.location, 2) == x.value);
    for (int q = 0; q < 20; ++q) {
      const double v = idw_interpolate(s, {u(rng), u(rng)}, 0.5 + (rng() % 40) / 10.0);
      REQUIRE(v >= lo);
      REQUIRE(v <= hi);
    }
  }

  // Large powers approach the nearest sample.
  const std::vector<Sample> asym{{{0, 0}, 1}, {{3, 0}, 5}, {{0, 4}, -2}};
  CHECK(idw_interpolate(asym, {0.5, 0.2}, 32) == doctest::Approx(1).epsilon(1e-6));
}

TEST_CASE("raster_from_elements") {
  const GridSpec g = GridSpec::for_raster(8, 6);
  CHECK(raster_from_elements({}, g).count_occupied() == 0);

  MapElement space;
  space.id = 4;
  space.kind = ElementKind::ParkingSpace;
  space.geometry = Polygon{{{1, 1}, {3, 1}, {3, 4}, {1, 4}}};
  MapElement path;
  path.id = 5;
  path.kind = ElementKind::Pathway;
  path.geometry = Polygon{{{0, 0}, {8, 0}, {8, 6}, {0, 6}}};
  const std::vector<MapElement> els{path, space};
  const auto grid = raster_from_elements(els, g);
  CHECK(grid.count_occupied() == 6);
  for (int r = 2; r <= 4; ++r)
    for (int c = 1; c <= 2; ++c) CHECK(grid.at(r, c) == 1);

  MapElement outside = space;
  outside.id = 9;
  outside.geometry.vertices[2] = {30, 4};
  try {
    raster_from_elements(std::vector<MapElement>{path, outside}, g);
    FAIL("expected BoundsError");
  } catch (const BoundsError& e) {
    CHECK(std::string(e.what()).find("9") != std::string::npos);
  }
}
