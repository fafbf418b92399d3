#include "ghostfem/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ghostfem/error.hpp"

namespace ghostfem {

GridTopology::GridTopology(Rect region, int subdivisions) : region_(region), n_(subdivisions), h_(0.0) {
  if (subdivisions < 1) {
    throw Error(ErrorCode::InvalidArgument, "grid needs at least one subdivision");
  }
  const double w = region.width();
  const double ht = region.height();
  if (!(w > 0.0) || !(ht > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "grid region must have positive extent");
  }
  if (std::abs(w - ht) > 1e-12 * std::max(w, ht)) {
    throw Error(ErrorCode::InvalidArgument, "only square regions are supported (square cells)");
  }
  h_ = w / subdivisions;
}

std::array<int, 2> GridTopology::node_index(std::size_t id) const {
  if (id >= node_count()) {
    throw Error(ErrorCode::OutOfRange, "node id " + std::to_string(id));
  }
  const auto stride = static_cast<std::size_t>(n_ + 1);
  return {static_cast<int>(id % stride), static_cast<int>(id / stride)};
}

std::array<int, 2> GridTopology::cell_index(std::size_t id) const {
  if (id >= cell_count()) {
    throw Error(ErrorCode::OutOfRange, "cell id " + std::to_string(id));
  }
  const auto stride = static_cast<std::size_t>(n_);
  return {static_cast<int>(id % stride), static_cast<int>(id / stride)};
}

Vec2 GridTopology::node_coord(std::size_t id) const {
  const auto [i, j] = node_index(id);
  return node_coord(i, j);
}

std::array<std::size_t, 4> GridTopology::cell_vertices(std::size_t id) const {
  const auto [i, j] = cell_index(id);
  return {node_id(i, j), node_id(i + 1, j), node_id(i + 1, j + 1), node_id(i, j + 1)};
}

Vec2 GridTopology::cell_origin(std::size_t id) const {
  const auto [i, j] = cell_index(id);
  return node_coord(i, j);
}

std::size_t GridTopology::locate_cell(Vec2 p) const noexcept {
  auto clamp_index = [this](double t) {
    const double f = std::floor(t / h_);
    return static_cast<int>(std::clamp(f, 0.0, static_cast<double>(n_ - 1)));
  };
  return cell_id(clamp_index(p.x - region_.lower.x), clamp_index(p.y - region_.lower.y));
}

}  // namespace ghostfem
