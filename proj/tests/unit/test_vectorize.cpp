#include <doctest.h>

#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <set>

#include "garagemap/error.hpp"
#include "garagemap/vectorize.hpp"
#include "synthetic.hpp"
#include "test_util.hpp"

using namespace garagemap;

namespace {

BitGrid grid_from(std::initializer_list<const char*> rows) {
  std::string text;
  for (const auto* r : rows) (text += r) += '\n';
  return parse_bits_text(text);
}

bool same_partition(const LabelGrid& lg, const std::vector<int>& oracle, int oracle_count) {
  if (lg.count != oracle_count) return false;
  for (std::size_t i = 0; i < oracle.size(); ++i)
    if (lg.labels[i] != oracle[i]) return false;
  return true;
}

Polygon square(double x0, double y0, double x1, double y1) { return Polygon{{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}}; }

} // namespace

TEST_CASE("connected_components basics") {
  const auto all_free = connected_components(BitGrid(2, 2), 0, 4);
  CHECK(all_free.count == 1);
  CHECK(connected_components(BitGrid(3, 3, 1), 0, 4).count == 0);

  const auto anti = grid_from({"10", "01"});
  CHECK(connected_components(anti, 0, 4).count == 2);
  CHECK(connected_components(anti, 0, 8).count == 1);
  CHECK(connected_components(anti, 1, 4).at(0, 1) == 0);
}

TEST_CASE("connected_components matches flood fill on random grids") {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 1500; ++i) {
    const int w = 1 + static_cast<int>(rng() % 10), h = 1 + static_cast<int>(rng() % 10);
    const auto g = test_util::random_grid(rng, w, h, 0.2 + 0.6 * ((rng() % 100) / 100.0));
    for (std::uint8_t target : {0, 1})
      for (int conn : {4, 8}) {
        int count = 0;
        const auto oracle = synthetic::flood_fill_labels(g, target, conn, count);
        const auto lg = connected_components(g, target, conn);
        REQUIRE(same_partition(lg, oracle, count));
        std::size_t cells = 0;
        for (auto l : lg.labels) cells += l != 0;
        REQUIRE(cells == static_cast<std::size_t>(std::count(g.bits.begin(), g.bits.end(), target)));
      }
  }
}

TEST_CASE("trace_contour") {
  SUBCASE("single cell") {
    BitGrid g(5, 4);
    g.at(2, 3) = 1;
    const auto p = trace_contour(connected_components(g, 1, 8), 1);
    CHECK(p.vertices == std::vector<Point2>{{3, 2}, {4, 2}, {4, 3}, {3, 3}});
  }
  SUBCASE("block and bar") {
    const auto block = grid_from({"0000", "0110", "0110"});
    CHECK(trace_contour(connected_components(block, 1, 8), 1).vertices == square(1, 1, 3, 3).vertices);
    const auto bar = grid_from({"111"});
    CHECK(trace_contour(connected_components(bar, 1, 8), 1).vertices == square(0, 0, 3, 1).vertices);
  }
  SUBCASE("unknown id") {
    const auto lg = connected_components(grid_from({"10"}), 1, 8);
    CHECK_THROWS_AS(trace_contour(lg, 2), LookupError);
    CHECK_THROWS_AS(trace_contour(lg, 0), LookupError);
  }
  SUBCASE("area equals cell count for hole-free components") {
    std::mt19937_64 rng(5);
    int checked = 0;
    for (int i = 0; i < 400; ++i) {
      const auto g = test_util::random_grid(rng, 12, 9, 0.45);
      for (std::uint8_t target : {0, 1}) {
        const int conn = target == 1 ? 8 : 4;
        const auto lg = connected_components(g, target, conn);
        // A component has no hole when the opposite value never forms an enclosed region inside it.
        // Checked via flood fill of everything outside the component from the padded border.
        for (int id = 1; id <= lg.count; ++id) {
          BitGrid pad(g.width + 2, g.height + 2);
          for (int r = 0; r < g.height; ++r)
            for (int c = 0; c < g.width; ++c) pad.at(r + 1, c + 1) = lg.at(r, c) == id ? 1 : 0;
          int outside = 0;
          synthetic::flood_fill_labels(pad, 0, conn == 8 ? 4 : 8, outside);
          if (outside != 1) continue;
          const auto poly = trace_contour(lg, id);
          std::size_t cells = 0;
          for (auto l : lg.labels) cells += l == id;
          REQUIRE(polygon_metrics(poly).area == static_cast<double>(cells));
          REQUIRE(signed_area(poly) > 0.0); // clockwise on screen is positive in (col, row) coordinates
          ++checked;
        }
      }
    }
    CHECK(checked > 1000);
  }
}

TEST_CASE("polygon_metrics and centroid") {
  const auto m = polygon_metrics(square(0, 0, 1, 1));
  CHECK(m.perimeter == 4.0);
  CHECK(m.area == 1.0);
  const Polygon tri{{{0, 0}, {4, 0}, {0, 3}}};
  CHECK(polygon_metrics(tri).perimeter == 12.0);
  CHECK(polygon_metrics(tri).area == 6.0);
  Polygon rev = tri;
  std::reverse(rev.vertices.begin(), rev.vertices.end());
  CHECK(polygon_metrics(rev).area == 6.0);
  CHECK(polygon_metrics(rev).perimeter == 12.0);
  const auto c = polygon_centroid(square(2, 4, 6, 10));
  CHECK(c.x == doctest::Approx(4));
  CHECK(c.y == doctest::Approx(7));
}

TEST_CASE("point_in_polygon agrees with an independent ray-casting oracle") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> u(0, 16);
  const auto l = synthetic::l_shape(2, 2, 10, 8, 4, 3);
  for (int i = 0; i < 3000; ++i) {
    const Point2 p{u(rng) * 0.75, u(rng) * 0.75};
    REQUIRE(point_in_polygon(l, p) == synthetic::inside_oracle(l, p));
  }
  CHECK(point_in_polygon(l, {2, 2}));
  CHECK(point_in_polygon(l, {6, 5}));
  CHECK_FALSE(point_in_polygon(l, {7, 6}));
}

TEST_CASE("simplify_polygon") {
  const Polygon with_mid{{{0, 0}, {1, 0}, {2, 0}, {2, 2}, {0, 2}}};
  CHECK(simplify_polygon(with_mid, 0.0).vertices == std::vector<Point2>{{0, 0}, {2, 0}, {2, 2}, {0, 2}});
  const Polygon minimal = square(0, 0, 3, 2);
  CHECK(simplify_polygon(minimal, 0.5) == minimal);

  // Square with a one-cell staircase notch along its top edge.
  Polygon noisy{{{0, 0}, {10, 0}, {10, 10}, {7, 10}, {7, 9}, {6, 9}, {6, 10}, {0, 10}}};
  const auto s = simplify_polygon(noisy, 1.5);
  CHECK(s.vertices == std::vector<Point2>{{0, 0}, {10, 0}, {10, 10}, {0, 10}});

  std::mt19937_64 rng(8);
  for (int i = 0; i < 200; ++i) {
    const auto g = test_util::random_grid(rng, 10, 10, 0.6);
    const auto lg = connected_components(g, 1, 8);
    if (lg.count == 0) continue;
    const auto poly = trace_contour(lg, 1);
    const double eps = (rng() % 30) / 10.0;
    const auto simple = simplify_polygon(poly, eps);
    REQUIRE(simple.size() >= 3);
    std::set<std::pair<double, double>> original;
    for (const auto& v : poly.vertices) original.insert({v.x, v.y});
    for (const auto& v : simple.vertices) REQUIRE(original.count({v.x, v.y}) == 1);
    if (simple.size() == poly.size()) continue;
    for (const auto& v : poly.vertices) {
      double best = 1e300;
      for (std::size_t k = 0; k < simple.size(); ++k) {
        const Point2 a = simple.vertices[k], b = simple.vertices[(k + 1) % simple.size()];
        const double vx = b.x - a.x, vy = b.y - a.y;
        const double t = std::clamp(((v.x - a.x) * vx + (v.y - a.y) * vy) / (vx * vx + vy * vy), 0.0, 1.0);
        best = std::min(best, std::hypot(v.x - a.x - t * vx, v.y - a.y - t * vy));
      }
      REQUIRE(best <= eps + 1e-12);
    }
  }
}

TEST_CASE("convex_hull") {
  const std::vector<Point2> tri{{0, 0}, {4, 0}, {0, 3}};
  CHECK(convex_hull(tri).vertices == tri);
  const std::vector<Point2> sq{{2, 2}, {0, 0}, {2, 0}, {1, 1}, {0, 2}, {1, 0}};
  CHECK(convex_hull(sq).vertices == std::vector<Point2>{{0, 0}, {2, 0}, {2, 2}, {0, 2}});
  const std::vector<Point2> line{{0, 0}, {1, 1}, {2, 2}};
  CHECK_THROWS_AS(convex_hull(line), GeometryError);

  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 50; ++trial) {
    // Regular pentagon with random radius and phase, plus interior points.
    const double r = 1 + 9 * u(rng), phase = 2 * std::numbers::pi * u(rng);
    std::vector<Point2> corners, pts;
    for (int k = 0; k < 5; ++k) {
      const double t = phase + 2 * std::numbers::pi * k / 5;
      corners.push_back({r * std::cos(t), r * std::sin(t)});
    }
    pts = corners;
    for (int i = 0; i < 50; ++i) {
      // Convex combination of the corners lies inside.
      std::vector<double> w(5);
      double sum = 0;
      for (auto& x : w) sum += (x = u(rng) + 1e-3);
      Point2 p{0, 0};
      for (int k = 0; k < 5; ++k) {
        p.x += corners[k].x * w[k] / sum;
        p.y += corners[k].y * w[k] / sum;
      }
      pts.push_back(p);
    }
    std::shuffle(pts.begin(), pts.end(), rng);
    const auto hull = convex_hull(pts);
    REQUIRE(hull.size() == 5);
    std::set<std::pair<double, double>> expect, got;
    for (const auto& c : corners) expect.insert({c.x, c.y});
    for (const auto& c : hull.vertices) got.insert({c.x, c.y});
    REQUIRE(expect == got);
    for (std::size_t k = 0; k < hull.size(); ++k)
      REQUIRE(edge_cross(hull.vertices[k], hull.vertices[(k + 1) % 5], hull.vertices[(k + 2) % 5]) > 0);
    for (const auto& p : pts)
      for (std::size_t k = 0; k < hull.size(); ++k)
        REQUIRE(edge_cross(hull.vertices[k], hull.vertices[(k + 1) % 5], p) >= -1e-9);
  }
}

TEST_CASE("detect_rectangle") {
  RectangleParams p;
  p.angle_tol_deg = 5;
  const auto rect = convex_hull(synthetic::rect_polygon(1, 0.5, 2, 1).vertices);
  const auto q = detect_rectangle(rect, p);
  REQUIRE(q);
  std::set<std::pair<double, double>> corners;
  for (const auto& v : q->vertices) corners.insert({v.x, v.y});
  CHECK(corners == std::set<std::pair<double, double>>{{0, 0}, {2, 0}, {2, 1}, {0, 1}});

  const auto rotated = synthetic::rect_polygon(0, 0, 2, 1, std::numbers::pi / 6);
  const auto qr = detect_rectangle(convex_hull(rotated.vertices), p);
  REQUIRE(qr);
  for (const auto& v : qr->vertices) {
    double best = 1e300;
    for (const auto& w : rotated.vertices) best = std::min(best, std::hypot(v.x - w.x, v.y - w.y));
    CHECK(best < 1e-12);
  }

  const Polygon tri{{{0, 0}, {4, 0}, {0, 3}}};
  CHECK_FALSE(detect_rectangle(tri, p));
  const Polygon kite{{{0, 0}, {4, 1}, {5, 5}, {1, 4}}};
  CHECK_FALSE(detect_rectangle(kite, p));

  RectangleParams bounded;
  bounded.max_area = 1.5;
  CHECK_FALSE(detect_rectangle(rect, bounded));
  bounded = {};
  bounded.min_perimeter = 7;
  CHECK_FALSE(detect_rectangle(rect, bounded));

  // Rotation invariance of the decision.
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> ang(0, 2 * std::numbers::pi);
  const std::vector<Polygon> shapes{synthetic::rect_polygon(0, 0, 6, 3), synthetic::plus_shape(0, 0, 9, 9, 3, 3),
                                    synthetic::l_shape(0, 0, 8, 6, 3, 2), Polygon{{{0, 0}, {6, 0}, {6, 3}, {3, 4}, {0, 3}}}};
  for (const auto& s : shapes) {
    const bool base = detect_rectangle(convex_hull(s.vertices), {}).has_value();
    for (int i = 0; i < 40; ++i) {
      const auto r = synthetic::rotate(s, {1.3, -0.7}, ang(rng));
      REQUIRE(detect_rectangle(convex_hull(r.vertices), {}).has_value() == base);
    }
  }
}

TEST_CASE("extract_elements") {
  SUBCASE("all free grid is one pathway") {
    const auto els = extract_elements(BitGrid(6, 4), {});
    REQUIRE(els.size() == 1);
    CHECK(els[0].kind == ElementKind::Pathway);
    CHECK(els[0].id == 1);
    CHECK(polygon_metrics(els[0].geometry).area == 24.0);
  }
  SUBCASE("one rectangle on open background") {
    BitGrid g(10, 8);
    for (int r = 2; r < 4; ++r)
      for (int c = 3; c < 7; ++c) g.at(r, c) = 1;
    const auto els = extract_elements(g, {});
    REQUIRE(els.size() == 2);
    CHECK(els[0].kind == ElementKind::Pathway);
    CHECK(els[1].kind == ElementKind::ParkingSpace);
    REQUIRE(els[1].corners);
    CHECK(els[1].anchor.x == 5.0);
    CHECK(els[1].anchor.y == 5.0); // rows 2..3 of 8 -> y in [4, 6]
  }
  SUBCASE("rotated rectangles get corners near the true ones") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 40; ++t) {
      const double w = 12 + 20 * u(rng), h = 12 + 30 * u(rng), angle = std::numbers::pi * u(rng);
      const int size = static_cast<int>(std::ceil(std::hypot(w, h))) + 6;
      const Polygon truth = synthetic::rect_polygon(size / 2.0, size / 2.0, w, h, angle);
      const auto els = extract_elements(synthetic::rasterize_shape(truth, size, size), {});
      REQUIRE(els.size() == 2);
      REQUIRE(els[1].kind == ElementKind::ParkingSpace);
      for (const auto& c : els[1].corners->vertices) {
        double nearest = 1e9;
        for (const auto& v : truth.vertices) nearest = std::min(nearest, std::hypot(c.x - v.x, c.y - v.y));
        CHECK(nearest <= 1.5);
      }
    }
  }
  SUBCASE("a wide-stemmed T is not a space") {
    const auto t = synthetic::rotate(synthetic::t_shape(0, 0, 31, 47, 16, 28), {15.5, 23.5}, 1.69);
    Polygon placed = t;
    for (auto& v : placed.vertices) v = {v.x + 14, v.y + 10};
    const auto els = extract_elements(synthetic::rasterize_shape(placed, 70, 70), {});
    for (const auto& el : els) CHECK(el.kind != ElementKind::ParkingSpace);
  }
  SUBCASE("plus sign is an obstacle") {
    const auto g = synthetic::rasterize_shape(synthetic::plus_shape(2, 2, 15, 15, 5, 5), 20, 20);
    const auto els = extract_elements(g, {});
    REQUIRE(els.size() == 2);
    CHECK(els[1].kind == ElementKind::Obstacle);
    CHECK(point_in_polygon(els[1].geometry, els[1].anchor));
  }
  SUBCASE("anchors lie inside and output is independent of thread count") {
    std::mt19937_64 rng(77);
    for (int i = 0; i < 20; ++i) {
      const auto garage = synthetic::random_garage(rng);
      const auto grid = raster_from_elements(garage.source, GridSpec::for_raster(garage.width, garage.height));
      auto params = synthetic::garage_params();
      const auto one = extract_elements(grid, params);
      params.threads = 4;
      REQUIRE(extract_elements(grid, params) == one);
      for (const auto& el : one) {
        REQUIRE(point_in_polygon(el.geometry, el.anchor));
        REQUIRE(el.corners.has_value() == (el.kind == ElementKind::ParkingSpace));
      }
    }
  }
}

TEST_CASE("element JSON lines") {
  BitGrid g(10, 8);
  for (int r = 2; r < 4; ++r)
    for (int c = 3; c < 7; ++c) g.at(r, c) = 1;
  g.at(6, 1) = 1;
  const auto els = extract_elements(g, {});
  const auto text = elements_to_jsonl(els);
  CHECK(elements_from_jsonl(text) == els);
  CHECK(text.rfind("{\"id\":1,\"kind\":\"Pathway\",\"anchor\":", 0) == 0);
  CHECK(text.find("\"corners\":null,\"polygon\":") != std::string::npos);

  const std::string bad = text + "{\"id\":9,\"kind\":\"Boat\",\"anchor\":[0,0],\"corners\":null,\"polygon\":[]}\n";
  try {
    elements_from_jsonl(bad);
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    CHECK(e.offset() == text.size());
  }
  CHECK_THROWS_AS(elements_from_jsonl("{not json\n"), FormatError);
}
