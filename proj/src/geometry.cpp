#include "ghostfem/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ghostfem/error.hpp"

namespace ghostfem {

CutPoints edge_intersections(std::span<const double, 4> phi, std::span<const Vec2, 4> coords) {
  int changes = 0;
  for (int i = 0; i < 4; ++i) changes += is_inside(phi[i]) != is_inside(phi[(i + 1) % 4]) ? 1 : 0;
  if (changes != 2) {
    throw Error(ErrorCode::AmbiguousCut,
                std::to_string(changes) + " sign changes around the cell; expected exactly 2");
  }
  CutPoints out;
  for (int i = 0; i < 4; ++i) {
    const int k = (i + 1) % 4;
    if (is_inside(phi[i]) == is_inside(phi[k])) continue;
    const double theta = phi[i] / (phi[i] - phi[k]);
    const Vec2 p = theta * coords[k] + (1.0 - theta) * coords[i];
    const EdgeCrossing crossing{i, theta, p};
    if (is_inside(phi[i])) {
      out.a = crossing;
    } else {
      out.b = crossing;
    }
  }
  return out;
}

namespace {

// Bilinear interpolant of the nodal values at p, cell given by (ll, lr, ur, ul).
double bilinear(std::span<const double, 4> phi, std::span<const Vec2, 4> coords, Vec2 p) {
  const double h = coords[1].x - coords[0].x;
  const double s = (p.x - coords[0].x) / h;
  const double t = (p.y - coords[0].y) / h;
  return phi[0] * (1 - s) * (1 - t) + phi[1] * s * (1 - t) + phi[2] * s * t + phi[3] * (1 - s) * t;
}

Vec2 bilinear_gradient(std::span<const double, 4> phi, std::span<const Vec2, 4> coords, Vec2 p) {
  const double h = coords[1].x - coords[0].x;
  const double s = (p.x - coords[0].x) / h;
  const double t = (p.y - coords[0].y) / h;
  const double gs = (phi[1] - phi[0]) * (1 - t) + (phi[2] - phi[3]) * t;
  const double gt = (phi[3] - phi[0]) * (1 - s) + (phi[2] - phi[1]) * s;
  return {gs / h, gt / h};
}

}  // namespace

Vec2 segment_normal(Vec2 a, Vec2 b, std::span<const double, 4> phi, std::span<const Vec2, 4> coords) {
  const Vec2 d = b - a;
  const double length = norm(d);
  const double h = coords[1].x - coords[0].x;
  if (length < 1e-14 * h) {
    throw Error(ErrorCode::ZeroLengthSegment, "boundary segment shorter than 1e-14 h");
  }
  Vec2 n{d.y / length, -d.x / length};
  const Vec2 mid = 0.5 * (a + b);
  double slope = dot(n, bilinear_gradient(phi, coords, mid));
  if (std::abs(slope) * h <= 1e-12 * (std::abs(phi[0]) + std::abs(phi[1]) + std::abs(phi[2]) + std::abs(phi[3]))) {
    // gradient nearly tangent at the midpoint; compare values on both sides
    const double step = 1e-3 * h;
    slope = bilinear(phi, coords, mid + step * n) - bilinear(phi, coords, mid - step * n);
  }
  return slope >= 0.0 ? n : -n;
}

double signed_area(std::span<const Vec2> vertices) noexcept {
  double twice = 0.0;
  const std::size_t m = vertices.size();
  for (std::size_t r = 0; r < m; ++r) twice += cross(vertices[r], vertices[(r + 1) % m]);
  return 0.5 * twice;
}

double CutPolygon::signed_area() const noexcept { return ghostfem::signed_area(vertices); }

bool CutPolygon::contains(Vec2 p) const noexcept {
  const std::size_t m = vertices.size();
  for (std::size_t r = 0; r < m; ++r) {
    const Vec2 e = vertices[(r + 1) % m] - vertices[r];
    if (cross(e, p - vertices[r]) < 0.0) return false;
  }
  return true;
}

CutPolygon build_polygon(std::size_t cell, std::span<const std::size_t, 4> vertex_ids,
                         std::span<const double, 4> phi, std::span<const Vec2, 4> coords, const CutPoints& cut) {
  CutPolygon poly;
  poly.cell = cell;
  poly.a = cut.a.point;
  poly.b = cut.b.point;

  // counterclockwise walk: inside vertices, with A/B spliced onto their edges
  std::vector<Vec2> ring;
  std::vector<std::size_t> ring_node;  // node id, or npos for crossings
  constexpr std::size_t npos = static_cast<std::size_t>(-1);
  for (int i = 0; i < 4; ++i) {
    if (is_inside(phi[i])) {
      ring.push_back(coords[i]);
      ring_node.push_back(vertex_ids[i]);
      poly.interior_nodes.push_back(vertex_ids[i]);
    }
    if (cut.a.edge == i) {
      ring.push_back(cut.a.point);
      ring_node.push_back(npos);
    } else if (cut.b.edge == i) {
      ring.push_back(cut.b.point);
      ring_node.push_back(npos);
    }
  }
  std::size_t start = 0;
  for (std::size_t r = 0; r < ring.size(); ++r) {
    if (ring_node[r] != npos && (ring_node[start] == npos || ring_node[r] < ring_node[start])) start = r;
  }
  std::rotate(ring.begin(), ring.begin() + static_cast<std::ptrdiff_t>(start), ring.end());
  std::sort(poly.interior_nodes.begin(), poly.interior_nodes.end());
  poly.vertices = std::move(ring);

  const double area = poly.signed_area();
  if (!(area > 1e-30)) {
    throw Error(ErrorCode::DegeneratePolygon, "cut polygon of cell " + std::to_string(cell) +
                                                  " has non-positive area " + std::to_string(area));
  }
  const double h = coords[1].x - coords[0].x;
  if (norm(poly.b - poly.a) < 1e-14 * h) {
    poly.negligible_segment = true;
    const Vec2 g = bilinear_gradient(phi, coords, 0.5 * (poly.a + poly.b));
    const double len = norm(g);
    poly.normal = len > 0.0 ? (1.0 / len) * g : Vec2{0.0, 0.0};
  } else {
    poly.normal = segment_normal(poly.a, poly.b, phi, coords);
  }
  return poly;
}

std::size_t DomainGeometry::active_count() const {
  return static_cast<std::size_t>(
      std::count_if(node_labels.begin(), node_labels.end(), [](NodeLabel l) { return l != NodeLabel::Inactive; }));
}

DomainGeometry build_geometry(const GridTopology& grid, const NodeValues& values) {
  DomainGeometry geom;
  geom.node_labels = classify_nodes(values, grid);
  geom.cell_labels = classify_cells(values, grid);
  geom.cut_index.assign(grid.cell_count(), -1);
  for (std::size_t c = 0; c < grid.cell_count(); ++c) {
    if (geom.cell_labels[c] != CellLabel::Cut) continue;
    const auto ids = grid.cell_vertices(c);
    std::array<double, 4> phi{};
    std::array<Vec2, 4> coords{};
    for (int k = 0; k < 4; ++k) {
      phi[k] = values.values[ids[k]];
      coords[k] = grid.node_coord(ids[k]);
    }
    const CutPoints cut = edge_intersections(phi, coords);
    geom.cut_index[c] = static_cast<int>(geom.cuts.size());
    geom.cuts.push_back(build_polygon(c, ids, phi, coords, cut));
  }
  return geom;
}

double domain_area(const GridTopology& grid, const DomainGeometry& geometry) {
  const double h = grid.spacing();
  double area = 0.0;
  for (std::size_t c = 0; c < grid.cell_count(); ++c) {
    if (geometry.cell_labels[c] == CellLabel::Interior) area += h * h;
  }
  for (const CutPolygon& p : geometry.cuts) area += p.signed_area();
  return area;
}

std::vector<Vec2> to_reference(std::span<const Vec2> points, Vec2 origin, double h) {
  std::vector<Vec2> out;
  out.reserve(points.size());
  for (Vec2 p : points) out.push_back({(p.x - origin.x) / h, (p.y - origin.y) / h});
  return out;
}

}  // namespace ghostfem
