#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "ghostfem/grid.hpp"
#include "ghostfem/levelset.hpp"
#include "ghostfem/vec2.hpp"

namespace ghostfem {

/// Boundary crossing on cell edge `edge` (from vertex edge to vertex edge+1 mod 4).
struct EdgeCrossing {
  int edge = -1;
  double theta = 0.0;
  Vec2 point;
};

/// A leaves an inside vertex, B enters one, walking the cell counterclockwise.
struct CutPoints {
  EdgeCrossing a;
  EdgeCrossing b;
};

/// Locates the two boundary crossings of a cut cell from its nodal values.
/// Throws AmbiguousCut unless the sign pattern changes exactly twice.
CutPoints edge_intersections(std::span<const double, 4> phi, std::span<const Vec2, 4> coords);

/// Unit normal of the segment a-b pointing toward increasing phi, where phi is
/// the bilinear interpolant of the cell's nodal values.
Vec2 segment_normal(Vec2 a, Vec2 b, std::span<const double, 4> phi, std::span<const Vec2, 4> coords);

/// Inside part of one cut cell.
struct CutPolygon {
  std::size_t cell = 0;
  /// Counterclockwise, 3 to 5 vertices, starting from the lowest-id inside node.
  std::vector<Vec2> vertices;
  Vec2 a;
  Vec2 b;
  Vec2 normal;
  std::vector<std::size_t> interior_nodes;
  /// A and B coincide to within 1e-14 h (the cut passes through a snapped
  /// vertex); such a segment carries no boundary terms.
  bool negligible_segment = false;

  [[nodiscard]] double signed_area() const noexcept;
  /// Closed containment test; the polygon is convex.
  [[nodiscard]] bool contains(Vec2 p) const noexcept;
};

CutPolygon build_polygon(std::size_t cell, std::span<const std::size_t, 4> vertex_ids,
                         std::span<const double, 4> phi, std::span<const Vec2, 4> coords, const CutPoints& cut);

double signed_area(std::span<const Vec2> vertices) noexcept;

/// Node and cell classification plus the cut polygons of a snapped level set.
struct DomainGeometry {
  std::vector<NodeLabel> node_labels;
  std::vector<CellLabel> cell_labels;
  /// Ascending cell id.
  std::vector<CutPolygon> cuts;
  /// cut_index[c] indexes `cuts` for cut cells, -1 otherwise.
  std::vector<int> cut_index;

  [[nodiscard]] bool is_active(std::size_t node) const { return node_labels[node] != NodeLabel::Inactive; }
  [[nodiscard]] std::size_t active_count() const;
};

DomainGeometry build_geometry(const GridTopology& grid, const NodeValues& values);

/// Area of the polygonal domain: full interior cells plus cut polygons.
double domain_area(const GridTopology& grid, const DomainGeometry& geometry);

/// Polygon vertices mapped to the unit reference square of its cell.
std::vector<Vec2> to_reference(std::span<const Vec2> points, Vec2 origin, double h);

}  // namespace ghostfem
