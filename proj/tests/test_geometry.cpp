#include <doctest.h>

#include <cfloat>
#include <cmath>
#include <map>
#include <numbers>

#include "ghostfem/error.hpp"
#include "ghostfem/geometry.hpp"

using namespace ghostfem;

namespace {

const std::array<Vec2, 4> kSmall = {Vec2{0, 0}, Vec2{0.1, 0}, Vec2{0.1, 0.1}, Vec2{0, 0.1}};
const std::array<std::size_t, 4> kIds = {10, 11, 22, 21};

CutPolygon polygon_for(const std::array<double, 4>& phi) {
  return build_polygon(7, kIds, phi, kSmall, edge_intersections(phi, kSmall));
}

}  // namespace

TEST_CASE("edge intersection parameters") {
  const std::array<double, 4> phi = {-1.0, 3.0, 3.0, 3.0};
  const CutPoints cut = edge_intersections(phi, kSmall);
  CHECK(cut.a.edge == 0);
  CHECK(cut.a.theta == doctest::Approx(0.25));
  CHECK(cut.a.point.x == doctest::Approx(0.025));
  CHECK(cut.a.point.y == 0.0);
  CHECK(cut.b.edge == 3);
  CHECK(cut.b.point.y == doctest::Approx(0.025));

  const std::array<double, 4> sym = {-1.0, 1.0, 1.0, -1.0};
  const CutPoints mid = edge_intersections(sym, kSmall);
  CHECK(mid.a.theta == doctest::Approx(0.5));
  CHECK(mid.a.point.x == doctest::Approx(0.05));

  const std::array<double, 4> checker = {-1.0, 1.0, -1.0, 1.0};
  CHECK_THROWS_WITH_AS(edge_intersections(checker, kSmall), doctest::Contains("AmbiguousCut"), Error);
}

TEST_CASE("polygon sizes and orientation") {
  const CutPolygon tri = polygon_for({1.0, -1.0, 1.0, 1.0});
  CHECK(tri.vertices.size() == 3);
  const CutPolygon quad = polygon_for({-1.0, -2.0, 1.0, 1.0});
  CHECK(quad.vertices.size() == 4);
  const CutPolygon pent = polygon_for({-1.0, -1.0, -1.0, 1.0});
  CHECK(pent.vertices.size() == 5);
  for (const CutPolygon* p : {&tri, &quad, &pent}) {
    CHECK(p->signed_area() > 0.0);
    CHECK(p->cell == 7);
    for (Vec2 v : p->vertices) {
      CHECK(v.x >= 0.0);
      CHECK(v.x <= 0.1);
      CHECK(v.y >= 0.0);
      CHECK(v.y <= 0.1);
    }
  }
  CHECK(tri.vertices.front() == kSmall[1]);
  CHECK(tri.interior_nodes == std::vector<std::size_t>{11});
  CHECK(quad.vertices.front() == kSmall[0]);
  CHECK(quad.interior_nodes == std::vector<std::size_t>{10, 11});
  // the lower half of the cell below the line through (0.1, 2/3 of h) and (0, h/2)
  CHECK(quad.signed_area() == doctest::Approx(0.1 * (0.05 + 0.1 * 2.0 / 3.0) / 2.0));
  CHECK(pent.signed_area() == doctest::Approx(0.01 - 0.5 * 0.05 * 0.05));
}

TEST_CASE("segment normal orientation") {
  const std::array<Vec2, 4> cell = {Vec2{-1, -1}, Vec2{1, -1}, Vec2{1, 1}, Vec2{-1, 1}};
  const std::array<double, 4> phi = {-1.0, 1.0, 1.0, -1.0};
  const Vec2 n = segment_normal({0, 0.5}, {0, -0.5}, phi, cell);
  CHECK(n.x == doctest::Approx(1.0));
  CHECK(n.y == doctest::Approx(0.0));
  const Vec2 r = segment_normal({0, -0.5}, {0, 0.5}, phi, cell);
  CHECK(r == n);
  CHECK_THROWS_WITH_AS(segment_normal({0, 0}, {0, 1e-16}, phi, cell), doctest::Contains("ZeroLengthSegment"), Error);
}

TEST_CASE("a cut through a snapped vertex has no boundary segment") {
  const CutPolygon p = polygon_for({-1.0, DBL_EPSILON, -1.0, -1.0});
  CHECK(p.negligible_segment);
  CHECK(p.signed_area() == doctest::Approx(0.01));
  CHECK(norm(p.normal) == doctest::Approx(1.0));
  CHECK(p.normal.x > 0.0);
  CHECK(p.normal.y < 0.0);
}

TEST_CASE("circle geometry") {
  const double r = 0.4;
  const LevelSetField circle = LevelSetField::circle(0.5, 0.5, r);

  SUBCASE("normals approach the analytic gradient") {
    const GridTopology g(Rect{{0, 0}, {1, 1}}, 80);
    const DomainGeometry geo = build_geometry(g, snap_to_grid(sample_nodes(circle, g), g.spacing(), 2.0));
    int checked = 0;
    for (const CutPolygon& p : geo.cuts) {
      const Vec2 m = 0.5 * (p.a + p.b);
      if (m.x < 0.85 || std::abs(m.y - 0.5) > 0.1) continue;
      const Vec2 d = m - Vec2{0.5, 0.5};
      const Vec2 exact = (1.0 / norm(d)) * d;
      CHECK(norm(p.normal - exact) < 2.0 * g.spacing());
      ++checked;
    }
    CHECK(checked > 0);
  }

  SUBCASE("polygon area converges at second order") {
    std::vector<double> ratio;
    for (int N : {40, 80, 160}) {
      const GridTopology g(Rect{{0, 0}, {1, 1}}, N);
      const DomainGeometry geo = build_geometry(g, snap_to_grid(sample_nodes(circle, g), g.spacing(), 2.0));
      const double err = std::abs(domain_area(g, geo) - std::numbers::pi * r * r);
      ratio.push_back(err / (g.spacing() * g.spacing()));
    }
    for (double c : ratio) CHECK(c < 2.0 * ratio.front() + 1e-3);
  }

  SUBCASE("boundary segments form closed polylines") {
    const GridTopology g(Rect{{0, 0}, {1, 1}}, 37);
    const DomainGeometry geo = build_geometry(g, snap_to_grid(sample_nodes(circle, g), g.spacing(), 2.0));
    std::vector<Vec2> ends;
    for (const CutPolygon& p : geo.cuts) {
      ends.push_back(p.a);
      ends.push_back(p.b);
      for (Vec2 v : p.vertices) {
        const Vec2 o = g.cell_origin(p.cell);
        CHECK(v.x >= o.x - 1e-15);
        CHECK(v.x <= o.x + g.spacing() + 1e-15);
        CHECK(v.y >= o.y - 1e-15);
        CHECK(v.y <= o.y + g.spacing() + 1e-15);
      }
    }
    for (std::size_t i = 0; i < ends.size(); ++i) {
      int matches = 0;
      for (std::size_t j = 0; j < ends.size(); ++j)
        if (norm(ends[i] - ends[j]) < 1e-12) ++matches;
      CHECK(matches == 2);
    }
  }

  SUBCASE("labels and indices agree") {
    const GridTopology g(Rect{{0, 0}, {1, 1}}, 20);
    const NodeValues v = snap_to_grid(sample_nodes(circle, g), g.spacing(), 2.0);
    const DomainGeometry geo = build_geometry(g, v);
    CHECK(geo.node_labels == classify_nodes(v, g));
    CHECK(geo.cell_labels == classify_cells(v, g));
    std::size_t cut = 0;
    for (std::size_t c = 0; c < g.cell_count(); ++c) {
      if (geo.cell_labels[c] != CellLabel::Cut) {
        CHECK(geo.cut_index[c] == -1);
        continue;
      }
      REQUIRE(geo.cut_index[c] == static_cast<int>(cut));
      CHECK(geo.cuts[cut].cell == c);
      for (std::size_t node : g.cell_vertices(c)) CHECK(geo.is_active(node));
      ++cut;
    }
    CHECK(cut == geo.cuts.size());
  }
}

TEST_CASE("reference mapping") {
  const std::vector<Vec2> pts = {{0.3, 0.4}, {0.35, 0.45}};
  const auto ref = to_reference(pts, {0.3, 0.4}, 0.1);
  CHECK(ref[0] == Vec2{0, 0});
  CHECK(ref[1].x == doctest::Approx(0.5));
  CHECK(ref[1].y == doctest::Approx(0.5));
}
