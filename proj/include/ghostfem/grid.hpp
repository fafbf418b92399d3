#pragma once

#include <array>
#include <cstddef>

#include "ghostfem/vec2.hpp"

namespace ghostfem {

/// Axis-aligned rectangle given by its lower-left and upper-right corners.
struct Rect {
  Vec2 lower;
  Vec2 upper;

  [[nodiscard]] double width() const noexcept { return upper.x - lower.x; }
  [[nodiscard]] double height() const noexcept { return upper.y - lower.y; }
  [[nodiscard]] double area() const noexcept { return width() * height(); }
};

/// Regular N x N grid of square cells over a square region.
///
/// Node (i, j) sits at lower + (i h, j h) and has id j (N + 1) + i; cell (i, j)
/// has its lower-left vertex at node (i, j) and id j N + i. Both numberings are
/// row-major from the lower-left corner.
class GridTopology {
 public:
  GridTopology(Rect region, int subdivisions);

  [[nodiscard]] const Rect& region() const noexcept { return region_; }
  [[nodiscard]] int subdivisions() const noexcept { return n_; }
  [[nodiscard]] double spacing() const noexcept { return h_; }
  [[nodiscard]] std::size_t node_count() const noexcept {
    return static_cast<std::size_t>(n_ + 1) * static_cast<std::size_t>(n_ + 1);
  }
  [[nodiscard]] std::size_t cell_count() const noexcept {
    return static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_);
  }

  [[nodiscard]] std::size_t node_id(int i, int j) const noexcept {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(n_ + 1) + static_cast<std::size_t>(i);
  }
  [[nodiscard]] std::size_t cell_id(int i, int j) const noexcept {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(i);
  }
  [[nodiscard]] std::array<int, 2> node_index(std::size_t id) const;
  [[nodiscard]] std::array<int, 2> cell_index(std::size_t id) const;

  [[nodiscard]] Vec2 node_coord(std::size_t id) const;
  [[nodiscard]] Vec2 node_coord(int i, int j) const noexcept {
    return {region_.lower.x + i * h_, region_.lower.y + j * h_};
  }

  /// Vertices counterclockwise from the lower-left: (ll, lr, ur, ul).
  [[nodiscard]] std::array<std::size_t, 4> cell_vertices(std::size_t id) const;
  [[nodiscard]] Vec2 cell_origin(std::size_t id) const;

  /// Cell containing the point, clamped onto the grid; ties go to the upper/right cell.
  [[nodiscard]] std::size_t locate_cell(Vec2 p) const noexcept;

 private:
  Rect region_;
  int n_;
  double h_;
};

}  // namespace ghostfem
